"""Exact counts of labeled k-regular graphs by independent routes.

Three routes produce (and cross-check) the integers:

* ``count_hadamard``: the exact moment formula.  The bracket
  [y^k] exp(-i sum_j x_j y^j) / sqrt(1 - y^2) is expanded as a sparse
  polynomial over Gaussian rationals, raised to the n-th power, and
  reduced by the moment rule with weight 1/j on variable j; the result
  times (-1)^{nk/2} must be a plain nonnegative integer.
* ``count_brute``: backtracking over the upper-triangular adjacency
  matrix with degree-feasibility pruning.
* ingested reference tables in plain b-file format ("n value" lines).

Counts are held in a :class:`CountTable` keyed (k, n) with provenance and
an optional plain-text cache ("k n count provenance" per line).  The
count_* functions are pure; a CountTable is the one mutable object here,
intended for a single writer with concurrent readers between writes.  Table
lookups answer the structural cases without storage: the empty graph
gives 1, there is no k-regular graph on 1..k vertices, and none at all
when n*k is odd.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .multipoly import MPoly, gaussian_hadamard, mono_mul
from .series import GaussianRational, Series

PROV_FORMULA = "formula"
PROV_BRUTE = "brute"
PROV_INGESTED = "ingested"

DATA_DIR = Path(__file__).parent / "data"

DEFAULT_BRUTE_LIMIT = 10


class CountError(Exception):
    """Base class for exact-count failures."""


class NonIntegerResult(CountError):
    """The moment formula produced a non-integral value: implementation bug."""


class NonRealResult(CountError):
    """The moment formula produced an imaginary part: implementation bug."""


class LimitExceeded(CountError):
    """Brute-force enumeration was asked to exceed its configured limit."""


class MissingCount(CountError, KeyError):
    """A required count is neither structural nor stored."""

    def __init__(self, k: int, n: int):
        super().__init__((k, n))
        self.k, self.n = k, n

    def __str__(self):
        return f"no count available for k={self.k}, n={self.n}"


class ParseError(CountError):
    """A b-file line could not be parsed."""

    def __init__(self, lineno: int, line: str):
        super().__init__(lineno)
        self.lineno, self.line = lineno, line

    def __str__(self):
        return f"malformed b-file line {self.lineno}: {self.line!r}"


class OffsetMismatch(CountError):
    """The declared offset disagrees with the first index in the file."""


class CountTable:
    """Exact counts keyed (k, n) with provenance, plus structural answers.

    The structural rules (empty graph counts 1, nothing on 1..k vertices,
    nothing when n*k is odd) hold for plain regular-graph counts; tables
    of connected counts disable them and act as pure storage, because the
    empty graph is not a connected component.
    """

    def __init__(self, enforce_structural: bool = True):
        self.entries: dict[tuple[int, int], int] = {}
        self.provenance: dict[tuple[int, int], str] = {}
        self.enforce_structural = enforce_structural

    @staticmethod
    def structural(k: int, n: int) -> int | None:
        """Counts forced by structure alone, None when a real count is needed."""
        if n == 0:
            return 1
        if (n * k) % 2:
            return 0
        if 1 <= n <= k:
            return 0
        if k == 0:
            return 1  # only the empty graph on n isolated vertices
        return None

    def _structural(self, k: int, n: int) -> int | None:
        return self.structural(k, n) if self.enforce_structural else None

    def known(self, k: int, n: int) -> bool:
        return self._structural(k, n) is not None or (k, n) in self.entries

    def get(self, k: int, n: int) -> int:
        s = self._structural(k, n)
        if s is not None:
            return s
        try:
            return self.entries[(k, n)]
        except KeyError:
            raise MissingCount(k, n) from None

    def put(self, k: int, n: int, count: int, provenance: str):
        if count < 0:
            raise ValueError("counts are nonnegative")
        s = self._structural(k, n)
        if s is not None:
            if count != s:
                raise ValueError(
                    f"count {count} for (k={k}, n={n}) contradicts the structural value {s}"
                )
            return
        old = self.entries.get((k, n))
        if old is not None and old != count:
            raise ValueError(
                f"conflicting counts for (k={k}, n={n}): {old} vs {count}"
            )
        self.entries[(k, n)] = count
        self.provenance.setdefault((k, n), provenance)

    def merge(self, other: "CountTable"):
        for (k, n), count in other.entries.items():
            self.put(k, n, count, other.provenance[(k, n)])

    def save_cache(self, path: str | Path):
        lines = []
        for (k, n) in sorted(self.entries):
            lines.append(f"{k} {n} {self.entries[(k, n)]} {self.provenance[(k, n)]}")
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))

    @staticmethod
    def load_cache(path: str | Path) -> "CountTable":
        table = CountTable()
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(lineno, raw)
            try:
                k, n, count = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(lineno, raw) from None
            table.put(k, n, count, parts[3])
        return table


def _structural_count(k: int, n: int) -> int | None:
    return CountTable.structural(k, n)


def inner_bracket(k: int) -> MPoly:
    """[y^k] exp(-i sum_{j<=k} x_j y^j) / sqrt(1 - y^2), exact over Q(i).

    Variables 1..k; each monomial has weighted degree sum(j * e_j) of the
    same parity as k and at most k.
    """
    sqrt_coeffs = [Fraction(math.comb(2 * m, m), 4**m) for m in range(k // 2 + 1)]
    terms: dict = {}

    def walk(j: int, budget: int, mono: dict[int, int], coeff: Fraction, degree: int):
        if j > k:
            if budget % 2 == 0:
                c = coeff * sqrt_coeffs[budget // 2] * GaussianRational.i_power(-degree)
                key = tuple(sorted(mono.items()))
                acc = terms.get(key)
                acc = c if acc is None else acc + c
                if acc:
                    terms[key] = acc
                elif key in terms:
                    del terms[key]
            return
        e = 0
        fact = 1
        while e * j <= budget:
            if e:
                fact *= e
                mono[j] = e
            walk(j + 1, budget - e * j, mono, coeff / fact, degree + e)
            e += 1
        mono.pop(j, None)

    walk(1, k, {}, Fraction(1), 0)
    return MPoly(terms)


def _mul_pruned(a: MPoly, b: MPoly, bound: int) -> MPoly:
    """Sparse product dropping monomials of weighted degree above bound."""
    out: dict = {}
    for m1, c1 in a.terms.items():
        d1 = sum(v * e for v, e in m1)
        for m2, c2 in b.terms.items():
            if d1 + sum(v * e for v, e in m2) > bound:
                continue
            mono = mono_mul(m1, m2)
            prod = c1 * c2
            acc = out.get(mono)
            acc = prod if acc is None else acc + prod
            if acc:
                out[mono] = acc
            elif mono in out:
                del out[mono]
    return MPoly(out)


def count_hadamard(k: int, n: int) -> int:
    """Exact number of k-regular labeled graphs on n vertices by the moment formula."""
    if k < 2:
        raise ValueError("the moment formula requires k >= 2")
    if (n * k) % 2:
        raise ValueError("n*k must be even (no regular graph exists otherwise)")
    bracket = inner_bracket(k)
    bound = n * k
    power = MPoly.const(GaussianRational(1))
    base = bracket
    e = n
    while e:
        if e & 1:
            power = _mul_pruned(power, base, bound)
        e >>= 1
        if e:
            base = _mul_pruned(base, base, bound)
    alphas = {j: Fraction(1, j) for j in range(1, k + 1)}
    value = gaussian_hadamard(power, alphas)
    if isinstance(value, Fraction):
        value = GaussianRational(value)
    sign = -1 if (n * k // 2) % 2 else 1
    value = value * sign
    if value.im != 0:
        raise NonRealResult(f"imaginary part {value.im} for (k={k}, n={n})")
    real = value.re
    if real.denominator != 1 or real < 0:
        raise NonIntegerResult(f"value {real} for (k={k}, n={n})")
    return int(real)


def count_brute(k: int, n: int, limit: int = DEFAULT_BRUTE_LIMIT) -> int:
    """Exact count by backtracking over the upper-triangular adjacency matrix.

    Vertices are completed in index order: each step chooses the whole
    remaining neighborhood of the smallest unfinished vertex among higher
    indices, pruning whenever some remaining degree exceeds the slots left.
    """
    if n > limit:
        raise LimitExceeded(f"n = {n} exceeds the brute-force limit {limit}")
    if n == 0:
        return 1
    if k >= n or (n * k) % 2:
        return 0
    if k == 0:
        return 1
    rem = [k] * n

    def fill(i: int) -> int:
        while i < n and rem[i] == 0:
            i += 1
        if i == n:
            return 1
        candidates = [j for j in range(i + 1, n) if rem[j] > 0]
        need = rem[i]
        if need > len(candidates):
            return 0
        total = 0
        rem[i] = 0
        for chosen in combinations(candidates, need):
            for j in chosen:
                rem[j] -= 1
            open_after = [j for j in range(i + 1, n) if rem[j] > 0]
            slots = len(open_after) - 1
            if all(rem[j] <= slots for j in open_after):
                total += fill(i + 1)
            for j in chosen:
                rem[j] += 1
        rem[i] = need
        return total

    return fill(0)


def count_two_regular(n: int) -> int:
    """Number of 2-regular labeled graphs: n! [x^n] exp(sum_{m>=3} x^m/(2m))."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    cycles = Series(
        [Fraction(0)] * 3 + [Fraction(1, 2 * m) for m in range(3, n + 1)], n
    )
    egf = cycles.exp()
    value = egf[n] * math.factorial(n)
    if value.denominator != 1:
        raise NonIntegerResult(f"two-regular count for n={n} came out {value}")
    return int(value)


def load_bfile(
    path: str | Path, k: int, offset: int | None = None, connected: bool = False
) -> CountTable:
    """Parse a plain b-file ("n value" per line, '#' comments) into a table.

    The (k, connected-or-not) meaning of the file is the caller's: the
    parsed entries are attached to the given k, and the connected flag
    only decides whether the plain-count structural rules apply.
    """
    table = CountTable(enforce_structural=not connected)
    first_index = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, raw)
        try:
            n, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, raw) from None
        if first_index is None:
            first_index = n
            if offset is not None and n != offset:
                raise OffsetMismatch(
                    f"declared offset {offset} but the file starts at index {n}"
                )
        table.put(k, n, value, PROV_INGESTED)
    return table


def reference_table(which: str, k: int) -> CountTable:
    """Packaged reference counts ('sg' or 'csg') for one k."""
    if which not in ("sg", "csg"):
        raise ValueError("which must be 'sg' or 'csg'")
    path = DATA_DIR / f"{which}_k{k}.txt"
    if not path.exists():
        raise MissingCount(k, -1)
    return load_bfile(path, k, offset=0, connected=(which == "csg"))


def get_or_compute(table: CountTable, k: int, n: int) -> int:
    """Table lookup falling back to the moment formula (cached as 'formula')."""
    if table.known(k, n):
        return table.get(k, n)
    value = count_hadamard(k, n)
    table.put(k, n, value, PROV_FORMULA)
    return value


def egf_reciprocal_coeffs(k: int, jmax: int, counts: CountTable) -> list[Fraction]:
    """Coefficients [x^0..x^jmax] of the reciprocal exponential generating function.

    The EGF starts at 1 (empty graph), so the reciprocal is a genuine power
    series; its coefficients vanish for 1 <= j <= k.
    """
    egf = Series(
        [Fraction(counts.get(k, m), math.factorial(m)) for m in range(jmax + 1)], jmax
    )
    return list(Series.one(jmax).div(egf).coefficients)
