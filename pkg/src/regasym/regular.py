"""Expansion coefficients for the number of k-regular labeled graphs.

The count of k-regular graphs on n vertices grows like

    (n k / e)^{n k / 2} / k!^n  *  e^{-(k^2-1)/4} / sqrt(2)  *  F(1/n)

for an exact rational series F with F(0) = 2.  This module computes
[z^r] F for fixed integer k >= 2, and recovers the coefficient as a single
polynomial in k (divided by k^r) by exact interpolation over sampled k.

Pipeline for fixed k (all arithmetic exact):

  psi      solved from the centered phase t^2/2 + t - log(1+t),
  T        the tree series T(x) = x psi(T(x)),
  u_{p,q}  [s^p] (1 + T(s))^{-q},
  v_{p,q}  [z^p] (sum_{j>=2} t_j z^{j-1})^q / sqrt(1-z^2),
  B0 rows  combine falling factorials of k with u and v values,
  C1, C2   an exponential assembled from B0 with an exact division by s^2,
  [z^r] F  the moment rule applied to [s^{2r}] C2 with negative weights
           -1/(2k) on t_1 and -1/j on t_j.

The square root 1/sqrt(k) never appears as an irrational: it is carried as
the formal variable u, u^2 is rewritten to 1/k on the fly, and the final
sign-sum keeps only the even part, so every stored coefficient is a plain
Fraction.  The division by s^2 is guarded by a valuation assertion; a
failure means a transcription bug, never a rounding issue.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .laplace import PhaseAmplitude, factorial_phase, psi_from_phase
from .multipoly import MPoly, PolySeries, gaussian_hadamard, monomial
from .series import (
    Series,
    ValuationViolation,
    lagrange_invert_coeff,
    newton_solve_tree,
    rational_str,
)

U_VAR = 0  # formal placeholder with u^2 = 1/k


class DegreeOverflow(Exception):
    """Held-out interpolation points disagreed with the fitted polynomial."""


@dataclass(frozen=True)
class Prefactor:
    """Exact description of the growth envelope factored out of the counts.

    The envelope is n^{alpha n} beta^n n^gamma times a pure constant, with
    alpha = k/2, beta = (k/e)^{k/2} / k!, gamma = 0 and the constant
    e^{-(k^2-1)/4} / sqrt(2).  Only exact integers and exponents are
    stored; high-precision evaluation happens in the validation harness.
    """

    k: int

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.k, 2)

    @property
    def gamma(self) -> Fraction:
        return Fraction(0)

    @property
    def beta_e_exp(self) -> Fraction:
        return -Fraction(self.k, 2)

    @property
    def beta_k_exp(self) -> Fraction:
        return Fraction(self.k, 2)

    @property
    def beta_factorial_exp(self) -> int:
        return -1

    @property
    def const_e_exp(self) -> Fraction:
        return -Fraction(self.k**2 - 1, 4)

    @property
    def const_sqrt2_exp(self) -> int:
        return -1


@dataclass(frozen=True)
class Expansion:
    """Expansion coefficients [z^0..z^r] for one fixed k."""

    k: int
    prefactor: Prefactor
    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class FormalKPolynomial:
    """[z^r] F multiplied by k^r, as one polynomial valid for k >= 2r+2."""

    r: int
    numerator_coeffs: tuple[Fraction, ...]

    @property
    def denom_power(self) -> int:
        return self.r

    def evaluate(self, k: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.numerator_coeffs):
            acc = acc * k + c
        return acc / Fraction(k) ** self.r


def expansion_phase(order: int) -> Series:
    """t^2/2 + t - log(1+t), the centered phase of the expansion (phi''(0) = 2)."""
    return factorial_phase(order) + Series.monomial(Fraction(1, 2), 2, order)


@lru_cache(maxsize=None)
def expansion_psi(order: int) -> Series:
    """The expansion's psi series, cross-checked against its closed display form."""
    pa = PhaseAmplitude(expansion_phase(order + 2), Series.one(order), Fraction(2))
    psi = psi_from_phase(pa)
    # closed form: (1 + (log(1/(1+t)) + t - t^2/2)/t^2)^(-1/2)
    log1p = Series(
        [Fraction(0)] + [Fraction((-1) ** (m + 1), m) for m in range(1, order + 3)],
        order + 2,
    )
    inner = -log1p + Series.x(order + 2) - Series.monomial(Fraction(1, 2), 2, order + 2)
    display = (Series.one(order) + inner.shift_down(2)).pow_rational(Fraction(-1, 2))
    assert psi == display, "psi disagrees with its closed form"
    return psi


@lru_cache(maxsize=None)
def tree_series(order: int) -> Series:
    """T(x) = x psi(T(x)) for the expansion's psi, exact through the order."""
    if order < 1:
        raise ValueError("the tree series needs order >= 1")
    return newton_solve_tree(expansion_psi(order - 1))


@lru_cache(maxsize=None)
def u_pq(p: int, q: int) -> Fraction:
    """[s^p] (1 + T(s))^{-q}, with the inversion-formula value asserted equal."""
    if p < 0 or q < 0:
        raise ValueError("u_pq needs nonnegative indices")
    if p == 0:
        return Fraction(1)
    outer = Series([1, 1], p).pow_rational(-q)
    value = outer.compose(tree_series(p))[p]
    psi = expansion_psi(p - 1) if p > 1 else expansion_psi(0)
    alt = -Fraction(q, p) * (
        psi.pow_rational(p) * Series([1, 1], p - 1).pow_rational(-(q + 1))
    )[p - 1]
    assert value == alt, f"u_pq({p},{q}): tree route {value} vs inversion route {alt}"
    return value


def u_pq_lagrange(p: int, q: int) -> Fraction:
    """Independent route to u_pq through the generic inversion helper."""
    if p == 0:
        return Fraction(1)
    h_prime = Series([1, 1], p - 1).pow_rational(-(q + 1)) * Fraction(-q)
    return lagrange_invert_coeff(h_prime, expansion_psi(max(p - 1, 0)), p)


@lru_cache(maxsize=None)
def v_pq(p: int, q: int) -> MPoly:
    """[z^p] (sum_{j>=2} t_j z^{j-1})^q / sqrt(1 - z^2).

    Only t_2..t_{p+1} can contribute, so the inner sum is truncated there.
    """
    if p < 0 or q < 0:
        raise ValueError("v_pq needs nonnegative indices")
    inner = PolySeries(
        [MPoly.zero()] + [MPoly.variable(j + 1) for j in range(1, p + 1)], p
    )
    invsqrt = PolySeries.from_series(
        Series([1, 0, -1], p).pow_rational(Fraction(-1, 2))
    )
    return (inner.pow_int(q) * invsqrt).coeff(p)


@lru_cache(maxsize=None)
def b0_row(j: int, k: int) -> MPoly:
    """Row j of the B0 series: a polynomial in u and t_1..t_j.

    The falling factorial prod_{m<a+b+l}(k-m) vanishes automatically as
    soon as a+b+l exceeds k, which is what keeps small k consistent
    without indicator bookkeeping.
    """
    if j < 1:
        raise ValueError("b0_row needs j >= 1")
    total = MPoly.zero()
    for ell in range(1, j + 1):
        for a in range(0, ell + 1):
            for b in range(0, j - ell - a + 1):
                depth = a + b + ell
                falling = 1
                for m in range(depth):
                    falling *= k - m
                if falling == 0:
                    continue
                scalar = (
                    Fraction(falling)
                    * Fraction(k - 1, 2) ** a
                    / (math.factorial(a) * math.factorial(b))
                    * u_pq(j - depth, 3 * a + b + ell)
                )
                if scalar == 0:
                    continue
                mono = MPoly(
                    {monomial({U_VAR: depth, 1: j - depth}): scalar}
                )
                total = total + mono * v_pq(ell - a, b)
    return total


def _reduce_u(k: int):
    invk = Fraction(1, k)

    def fn(p: MPoly) -> MPoly:
        return p.subs_square(U_VAR, invk)

    return fn


@lru_cache(maxsize=None)
def c2_series(k: int, r: int) -> PolySeries:
    """The sign-summed core series to s-order 2r, free of the variable u.

    Assembled per the fixed-k recipe: log(1 + B0) minus the t_2 shift term,
    an asserted exact division by s^2, the two constant corrections, exp,
    the even-in-u part doubled, then the T'(s t_1) factor.
    """
    if k < 2:
        raise ValueError("the pipeline requires k >= 2")
    if r < 0:
        raise ValueError("the expansion order must be nonnegative")
    n_lo = 2 * r
    n_hi = n_lo + 2
    red = _reduce_u(k)
    tree = tree_series(max(n_hi, 1))

    t_of_st1 = PolySeries(
        [MPoly.variable(1, i, tree[i]) if tree[i] else MPoly.zero() for i in range(n_hi + 1)],
        n_hi,
    )
    tprime_st1 = PolySeries(
        [
            MPoly.variable(1, i, (i + 1) * tree[i + 1]) if tree[i + 1] else MPoly.zero()
            for i in range(n_lo + 1)
        ],
        n_lo,
    )

    one_plus_t = PolySeries.one(n_hi) + t_of_st1
    inv = one_plus_t.inverse()
    inv2 = inv * inv
    inv4 = inv2 * inv2

    b0 = PolySeries(
        [MPoly.zero()] + [red(b0_row(j, k)) for j in range(1, n_hi + 1)], n_hi
    )
    log_term = (PolySeries.one(n_hi) + b0).log().map_coeffs(red)

    shift_mpoly = red(
        MPoly({monomial({U_VAR: 2, 2: 1}): Fraction(k * (k - 1))})
    )
    shift_term = (inv2.truncate(n_lo) * shift_mpoly).shift_up(2)

    numerator = log_term - shift_term
    if not (numerator.coeff(0).is_zero() and numerator.coeff(1).is_zero()):
        raise ValuationViolation(
            f"exponent numerator has s-valuation {numerator.valuation()} < 2 (k={k})"
        )

    exponent = -numerator.shift_down(2)
    exponent = exponent + inv4.truncate(n_lo) * Fraction((k - 1) ** 2, 4)
    const = red(
        MPoly(
            {
                monomial({U_VAR: 2}): Fraction(2 * k**2 * (k - 1), 4),
                (): Fraction((1 - k) * (k - 1), 4),
            }
        )
    )
    exponent = exponent + PolySeries.from_const(const, n_lo)
    if not exponent.coeff(0).is_zero():
        raise ValuationViolation(
            f"constant term of the exponent failed to cancel (k={k}): "
            f"{exponent.coeff(0)!r}"
        )

    c1 = exponent.exp().map_coeffs(red)
    even_doubled = c1.map_coeffs(lambda p: p.even_part(U_VAR) * 2)
    return (even_doubled * tprime_st1).map_coeffs(red)


def _moment_weights(k: int, r: int) -> dict[int, Fraction]:
    weights = {1: Fraction(-1, 2 * k)}
    for j in range(2, 2 * r + 3):
        weights[j] = Fraction(-1, j)
    return weights


@lru_cache(maxsize=None)
def sg_tilde_coeff(k: int, r: int) -> Fraction:
    """[z^r] of the expansion series for fixed k >= 2."""
    c2 = c2_series(k, r)
    slice_poly = c2.coeff(2 * r)
    value = gaussian_hadamard(slice_poly, _moment_weights(k, r))
    return value if r % 2 == 0 else -value


def sg_expansion(k: int, r: int) -> Expansion:
    """Coefficients [z^0..z^r] for fixed k, sharing one core series."""
    c2 = c2_series(k, r)
    weights = _moment_weights(k, r)
    coeffs = []
    for rho in range(r + 1):
        value = gaussian_hadamard(c2.coeff(2 * rho), weights)
        coeffs.append(value if rho % 2 == 0 else -value)
    if coeffs[0] != 2:
        raise ValuationViolation(f"[z^0] must be 2, got {coeffs[0]} (k={k})")
    return Expansion(k, Prefactor(k), tuple(coeffs))


def sg_series(k: int, r: int) -> Series:
    """The expansion as a Series of order r."""
    return Series(sg_expansion(k, r).coeffs, r)


def _lagrange_interpolate(xs: list[int], ys: list[Fraction]) -> list[Fraction]:
    """Exact interpolating polynomial coefficients (ascending), len(xs) points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for d, c in enumerate(basis):
                new[d] -= c * xs[j]
                new[d + 1] += c
            basis = new
            denom *= xs[i] - xs[j]
        scale = ys[i] / denom
        for d, c in enumerate(basis):
            coeffs[d] += c * scale
    return coeffs


def formal_k_interpolate(
    r: int, kmin: int | None = None, samples: int | None = None
) -> FormalKPolynomial:
    """Recover [z^r] * k^r as one polynomial in k by exact interpolation.

    Sampling starts at k = 2r+2 where every structural indicator is active,
    and uses 4r+1 points for the observed degree bound 4r.  Two held-out
    points verify the fit; disagreement raises DegreeOverflow rather than
    guessing a higher degree.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if kmin is None:
        kmin = max(2, 2 * r + 2)
    if samples is None:
        samples = 4 * r + 1
    ks = [kmin + i for i in range(samples)]
    ys = [sg_tilde_coeff(k, r) * Fraction(k) ** r for k in ks]
    coeffs = _lagrange_interpolate(ks, ys)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    poly = FormalKPolynomial(r, tuple(coeffs))
    for extra in (kmin + samples, kmin + samples + 1):
        expected = sg_tilde_coeff(extra, r)
        if poly.evaluate(extra) != expected:
            raise DegreeOverflow(
                f"degree-{4 * r} fit for r={r} fails at held-out k={extra}: "
                f"poly gives {poly.evaluate(extra)}, pipeline gives {expected}"
            )
    return poly


def expansion_json(exp: Expansion) -> str:
    """One record per coefficient: {k, r, coefficient}."""
    records = [
        {"k": exp.k, "r": i, "coefficient": rational_str(c)}
        for i, c in enumerate(exp.coeffs)
    ]
    return json.dumps(records, indent=2)


def formal_k_json(poly: FormalKPolynomial) -> str:
    doc = {
        "r": poly.r,
        "poly": [rational_str(c) for c in poly.numerator_coeffs],
        "denom_power": poly.denom_power,
    }
    if poly.r >= 3:
        # beyond r = 2 the single-polynomial form is only established for
        # k >= 2r+2, where every structural indicator is active
        doc["valid_k_min"] = 2 * poly.r + 2
    return json.dumps(doc, indent=2)
