"""High-precision residual harness for the exact expansions.

For each exact count c(k, n) and computed coefficients f_0..f_{r-1}, the
residual

    ( c(k,n) / prefactor(k,n)  -  sum_{j<r} f_j n^{-j} ) * n^r

must stay bounded in n if the expansion is correct; the harness evaluates
it in configurable binary precision (default 256 bits) and reproduces the
reference residual grids for n = 10..100 to two decimals.

The prefactor (nk/e)^{nk/2} / k!^n * e^{-(k^2-1)/4} / sqrt(2) overflows
any fixed-width float long before n = 100, so the whole quotient is
evaluated in log space; log(k!) is summed from exact integer logarithms
and log(count) comes from the exact integer, so no expansion is ever used
to validate itself.  Cells print with two decimals, rounding half to
even, and doubling the working precision must not change a printed digit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from .counts import CountTable, MissingCount

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 256

TABLE_NS = tuple(range(10, 101, 10))

# Reference residual grids at r = 3 (two-decimal cells, n = 10..100).
GOLDEN_SG = {
    2: ("1.79", "1.79", "1.80", "1.80", "1.79", "1.79", "1.79", "1.79", "1.79", "1.79"),
    3: ("5.04", "4.05", "3.79", "3.66", "3.60", "3.55", "3.52", "3.50", "3.48", "3.46"),
    4: ("17.93", "15.37", "14.75", "14.47", "14.31", "14.21", "14.14", "14.08", "14.04", "14.01"),
    5: ("2.16", "3.59", "4.36", "4.75", "4.98", "5.13", "5.24", "5.32", "5.38", "5.43"),
}
GOLDEN_CSG = {
    3: ("4.40", "2.05", "2.15", "2.26", "2.30", "2.31", "2.31", "2.31", "2.31", "2.31"),
    4: ("17.93", "15.37", "14.75", "14.47", "14.31", "14.20", "14.14", "14.08", "14.04", "14.01"),
}

# The published plain-count grid labels every row r=3, but its k=2 row is
# reproducible (all ten cells, two decimals) only with one more subtracted
# term, i.e. subtracting j <= 3 and scaling by n^4; with a strict r=3 the
# row converges to the exact next coefficient 170383/207360 ~ 0.82 instead
# of the printed ~1.79.  The override below records how the published row
# was actually built so the harness can reproduce it bit for bit.
PUBLISHED_EXTRA_TERMS: dict[tuple[str, int], int] = {("sg", 2): 1}


def published_r(which: str, k: int, r: int) -> int:
    """Effective number of subtracted terms for a published-grid row."""
    return r + PUBLISHED_EXTRA_TERMS.get((which, k), 0)


class PrecisionUnderflow(ArithmeticError):
    """Cancellation consumed more than precision-32 bits; retry higher."""


@dataclass(frozen=True)
class ResidualCell:
    k: int
    n: int
    r: int
    value: mpmath.mpf


def _log_prefactor(k: int, n: int) -> mpmath.mpf:
    """log of (nk/e)^{nk/2} / k!^n * e^{-(k^2-1)/4} / sqrt(2)."""
    log_kfact = mpmath.fsum(mpmath.log(i) for i in range(2, k + 1))
    return (
        Fraction(n * k, 2) * (mpmath.log(n) + mpmath.log(k) - 1)
        - n * log_kfact
        - Fraction(k * k - 1, 4)
        - mpmath.log(2) / 2
    )


def residual(
    k: int,
    n: int,
    r: int,
    count: int,
    coeffs: Sequence[Fraction],
    precision: int = DEFAULT_PRECISION,
) -> mpmath.mpf:
    """The scaled residual for one cell, or PrecisionUnderflow if the
    subtraction cancels more than precision-32 bits."""
    if count <= 0:
        raise ValueError(f"count for (k={k}, n={n}) must be positive, got {count}")
    if len(coeffs) < r:
        raise ValueError(f"need coefficients 0..{r - 1}, got {len(coeffs)}")
    with mpmath.workprec(precision):
        ratio = mpmath.exp(mpmath.log(mpmath.mpf(count)) - _log_prefactor(k, n))
        partial = mpmath.fsum(
            mpmath.mpf(c.numerator) / c.denominator / mpmath.mpf(n) ** j
            for j, c in enumerate(coeffs[:r])
        )
        diff = ratio - partial
        if ratio != 0:
            if diff == 0:
                raise PrecisionUnderflow(
                    f"(k={k}, n={n}): total cancellation at precision {precision}"
                )
            cancelled = mpmath.log(abs(ratio) / abs(diff), 2)
            if cancelled > precision - 32:
                raise PrecisionUnderflow(
                    f"(k={k}, n={n}): {mpmath.nstr(cancelled, 4)} bits cancelled "
                    f"at precision {precision}"
                )
        return diff * mpmath.mpf(n) ** r


def residual_cell(
    k: int,
    n: int,
    r: int,
    counts: CountTable,
    coeffs: Sequence[Fraction],
    precision: int = DEFAULT_PRECISION,
) -> ResidualCell:
    """Residual for one cell, retrying with doubled precision on underflow."""
    count = counts.get(k, n)
    prec = precision
    for _ in range(4):
        try:
            return ResidualCell(k, n, r, residual(k, n, r, count, coeffs, prec))
        except PrecisionUnderflow:
            prec *= 2
    raise PrecisionUnderflow(f"(k={k}, n={n}) still cancelling at precision {prec}")


def residual_table(
    ks: Sequence[int],
    ns: Sequence[int],
    r: int,
    counts_by_k: Mapping[int, CountTable],
    coeffs_by_k: Mapping[int, Sequence[Fraction]],
    precision: int = DEFAULT_PRECISION,
) -> list[tuple[int, list[ResidualCell | None]]]:
    """One row of cells per k; unavailable cells are None (and logged)."""
    rows: list[tuple[int, list[ResidualCell | None]]] = []
    for k in ks:
        cells: list[ResidualCell | None] = []
        for n in ns:
            try:
                cells.append(residual_cell(k, n, r, counts_by_k[k], coeffs_by_k[k], precision))
            except (MissingCount, KeyError) as exc:
                logger.warning("no residual for k=%d, n=%d: %s", k, n, exc)
                cells.append(None)
        rows.append((k, cells))
    return rows


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    """Exact rational value of a binary float (independent of mp precision)."""
    tup = getattr(x, "_mpf_", None)
    if tup is None:
        tup = mpmath.mpf(x)._mpf_
    sign, man, exp, _ = tup
    man, exp = int(man), int(exp)
    if man == 0:
        if exp != 0:
            raise ValueError(f"cannot convert special value {x!r} to a fraction")
        return Fraction(0)
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def round_half_even_2dp(x: mpmath.mpf) -> Fraction:
    """Round to 2 decimals, ties to even, exactly."""
    scaled = mpf_to_fraction(x) * 100
    floor = math.floor(scaled)
    rem = scaled - floor
    if rem > Fraction(1, 2):
        floor += 1
    elif rem == Fraction(1, 2) and floor % 2:
        floor += 1
    return Fraction(floor, 100)


def format_cell(cell: ResidualCell | None) -> str:
    if cell is None:
        return "NA"
    q = round_half_even_2dp(cell.value)
    return f"{q.numerator / q.denominator:.2f}"


def render_csv(ns: Sequence[int], rows) -> str:
    """Header "n,<n-values>", one row per k, cells at two decimals."""
    lines = [",".join(["n"] + [str(n) for n in ns])]
    for k, cells in rows:
        lines.append(",".join([str(k)] + [format_cell(c) for c in cells]))
    return "\n".join(lines) + "\n"


def render_json(ns: Sequence[int], rows) -> str:
    import json

    out = []
    for k, cells in rows:
        record = {"k": k, "cells": {}}
        for n, cell in zip(ns, cells):
            record["cells"][str(n)] = (
                None if cell is None else mpmath.nstr(cell.value, 30)
            )
        out.append(record)
    return json.dumps(out, indent=2)


def golden_for(which: str) -> dict[int, tuple[str, ...]]:
    if which == "sg":
        return GOLDEN_SG
    if which == "csg":
        return GOLDEN_CSG
    raise ValueError("which must be 'sg' or 'csg'")


def compare_to_golden(
    which: str, ns: Sequence[int], rows
) -> list[tuple[int, int, str, str]]:
    """Cells deviating from the reference grid by more than 0.01.

    Returns (k, n, got, expected) tuples; an empty list means every cell
    reproduces the printed value within the tolerance.
    """
    golden = golden_for(which)
    mismatches = []
    for k, cells in rows:
        if k not in golden:
            continue
        for n, cell in zip(ns, cells):
            if n not in TABLE_NS:
                continue
            expected = Fraction(golden[k][TABLE_NS.index(n)])
            if cell is None:
                mismatches.append((k, n, "NA", str(expected)))
                continue
            got = mpf_to_fraction(cell.value)
            if abs(got - expected) > Fraction(1, 100):
                mismatches.append(
                    (k, n, format_cell(cell), golden[k][TABLE_NS.index(n)])
                )
    return mismatches
