"""Exact truncated formal power series over arbitrary-precision rationals.

Every :class:`Series` carries an explicit truncation order: coefficients
beyond the order are *unknown*, not zero.  Binary operations return the
minimum of the operand orders so precision is never overstated, and
dividing by a pure power of the variable lowers the order by that power.
Laurent objects are never created: any division that would produce
negative powers first asserts the required valuation and fails loudly
if the cancellation the caller relied on did not happen.

All values are immutable and every operation is a pure function, so the
types defined here can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

Scalar = Union[int, Fraction]


class SeriesError(ArithmeticError):
    """Base class for exact-series arithmetic failures."""


class NonUnitDivisor(SeriesError):
    """Division required an invertible constant term (or a valuation match)."""


class BadConstantTerm(SeriesError):
    """exp/log/pow/compose received a series with the wrong constant term."""


class InsufficientOrder(SeriesError):
    """An operand is not known to enough terms for the requested result."""


class BadParity(SeriesError):
    """double_factorial received an even or out-of-range argument."""


class ValuationViolation(SeriesError):
    """A shift expected a valuation that the series does not have."""


def rational_str(q: Fraction) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when q = 1, sign on p."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`rational_str`."""
    return Fraction(text.strip())


def double_factorial(m: int) -> int:
    """(2n-1)!! for odd m = 2n-1 >= -1; the empty product (-1)!! is 1."""
    if m < -1 or m % 2 == 0:
        raise BadParity(f"double factorial requires an odd argument >= -1, got {m}")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


class GaussianRational:
    """Exact element of Q(i): re + im*i with rational components.

    Conjugation is an involution; all ring arithmetic is exact.  Only the
    exact-count formula needs i, so this type never enters the expansion
    pipelines.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *args):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def i_power(e: int) -> "GaussianRational":
        """i**e for any integer e."""
        return _I_POWERS[e % 4]

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


_I_POWERS = (
    GaussianRational(1, 0),
    GaussianRational(0, 1),
    GaussianRational(-1, 0),
    GaussianRational(0, -1),
)


class Series:
    """Truncated univariate power series with Fraction coefficients.

    ``Series(coeffs, order)`` stores coefficients 0..order; missing trailing
    entries of ``coeffs`` are taken to be exact zeros (a polynomial claim by
    the caller), extra entries are discarded.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar], order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            if not cs:
                raise ValueError("empty coefficient list needs an explicit order")
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        cs = cs[: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        object.__setattr__(self, "_coeffs", tuple(cs))

    def __setattr__(self, *args):
        raise AttributeError("Series is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(order: int) -> "Series":
        return Series([0], order)

    @staticmethod
    def one(order: int) -> "Series":
        return Series([1], order)

    @staticmethod
    def x(order: int) -> "Series":
        return Series([0, 1], order)

    @staticmethod
    def monomial(coeff: Scalar, power: int, order: int) -> "Series":
        if power > order:
            return Series.zero(order)
        return Series([0] * power + [coeff], order)

    # -- inspection ------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i <= self.order:
            raise IndexError(
                f"coefficient {i} of a series truncated at order {self.order} is unknown"
            )
        return self._coeffs[i]

    def valuation(self) -> int:
        """Index of the first nonzero stored coefficient, order+1 if none."""
        for i, c in enumerate(self._coeffs):
            if c:
                return i
        return self.order + 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        inner = ", ".join(rational_str(c) for c in self._coeffs)
        return f"Series([{inner}], order={self.order})"

    # -- order management ------------------------------------------------

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise InsufficientOrder(
                f"cannot extend a series of order {self.order} to order {order}"
            )
        return Series(self._coeffs[: order + 1], order)

    def extended(self, order: int) -> "Series":
        """Zero-pad to a higher order.

        This asserts knowledge the series does not carry, so it is reserved
        for callers holding genuine polynomials or iteration guesses.
        """
        if order <= self.order:
            return self.truncate(order)
        return Series(self._coeffs, order)

    # -- ring operations (min-order rule) ---------------------------------

    def _promote(self, other) -> "Series | None":
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Fraction)):
            return Series([other], self.order)
        return None

    def __add__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return Series([self._coeffs[i] + o._coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return Series([self._coeffs[i] - o._coeffs[i] for i in range(n + 1)], n)

    def __rsub__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Series([-c for c in self._coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Series([c * other for c in self._coeffs], self.order)
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self._coeffs, other._coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(min(len(a) - 1, n) + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b) - 1, n - i) + 1):
                if b[j]:
                    out[i + j] += ai * b[j]
        return Series(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return Series([c / other for c in self._coeffs], self.order)
        if isinstance(other, Series):
            return self.div(other)
        return NotImplemented

    # -- division and shifts ----------------------------------------------

    def div(self, b: "Series") -> "Series":
        """Exact quotient a/b through the appropriate order.

        Requires b(0) != 0, or else valuation(a) >= valuation(b) with the
        leading powers cancelling (the Laurent-free case).
        """
        v = b.valuation()
        if v > b.order:
            raise NonUnitDivisor("division by a series with no known nonzero coefficient")
        if v > 0:
            if self.valuation() < v:
                raise NonUnitDivisor(
                    f"dividend valuation {self.valuation()} < divisor valuation {v}"
                )
            return self.shift_down(v).div(b.shift_down(v))
        n = min(self.order, b.order)
        binv0 = b._coeffs[0]
        out = [Fraction(0)] * (n + 1)
        for m in range(n + 1):
            acc = self._coeffs[m]
            for i in range(1, m + 1):
                if b._coeffs[i]:
                    acc -= b._coeffs[i] * out[m - i]
            out[m] = acc / binv0
        return Series(out, n)

    def shift_down(self, m: int) -> "Series":
        """Divide by x**m; the valuation must be at least m."""
        if m == 0:
            return self
        if m > self.order:
            raise ValuationViolation(f"cannot shift a series of order {self.order} down by {m}")
        if any(self._coeffs[i] for i in range(m)):
            raise ValuationViolation(
                f"series has valuation {self.valuation()}, expected at least {m}"
            )
        return Series(self._coeffs[m:], self.order - m)

    def shift_up(self, m: int) -> "Series":
        """Multiply by x**m; the order grows by m (no knowledge is lost)."""
        return Series((Fraction(0),) * m + self._coeffs, self.order + m)

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "Series":
        if self.order == 0:
            raise InsufficientOrder("cannot differentiate a series known only to order 0")
        return Series(
            [i * self._coeffs[i] for i in range(1, self.order + 1)], self.order - 1
        )

    # -- transcendental operations -----------------------------------------

    def exp(self) -> "Series":
        """Series exponential; requires a zero constant term."""
        if self._coeffs[0] != 0:
            raise BadConstantTerm(f"exp requires constant term 0, got {self._coeffs[0]}")
        n = self.order
        a = self._coeffs
        e = [Fraction(1)] + [Fraction(0)] * n
        for m in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, m + 1):
                if a[i]:
                    acc += i * a[i] * e[m - i]
            e[m] = acc / m
        return Series(e, n)

    def log(self) -> "Series":
        """Series logarithm; requires constant term 1."""
        if self._coeffs[0] != 1:
            raise BadConstantTerm(f"log requires constant term 1, got {self._coeffs[0]}")
        n = self.order
        a = self._coeffs
        l = [Fraction(0)] * (n + 1)
        for m in range(1, n + 1):
            acc = m * a[m]
            for i in range(1, m):
                if a[m - i]:
                    acc -= i * l[i] * a[m - i]
            l[m] = acc / m
        return Series(l, n)

    def pow_rational(self, e: Scalar) -> "Series":
        """Binomial power a**e for rational e; requires constant term 1."""
        if self._coeffs[0] != 1:
            raise BadConstantTerm(f"pow requires constant term 1, got {self._coeffs[0]}")
        e = Fraction(e)
        n = self.order
        a = self._coeffs
        f = [Fraction(1)] + [Fraction(0)] * n
        for m in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, m + 1):
                if a[i]:
                    acc += (e * i - (m - i)) * a[i] * f[m - i]
            f[m] = acc / m
        return Series(f, n)

    def compose(self, inner: "Series") -> "Series":
        """outer(inner) through the minimum of the two orders; inner(0) must be 0."""
        if inner._coeffs[0] != 0:
            raise BadConstantTerm(
                f"composition requires inner constant term 0, got {inner._coeffs[0]}"
            )
        n = min(self.order, inner.order)
        inner_t = inner.truncate(n)
        res = Series([self._coeffs[n]], n)
        for i in range(n - 1, -1, -1):
            res = res * inner_t + Series([self._coeffs[i]], n)
        return res


def newton_solve_tree(psi: Series) -> Series:
    """Solve T(x) = x * psi(T(x)) by Newton iteration with order doubling.

    Returns T with T(0) = 0 and T'(0) = psi(0), exact through order
    psi.order + 1.  The solution exists and is unique whenever psi(0) != 0.
    """
    c0 = psi[0]
    if c0 == 0:
        raise BadConstantTerm("the tree equation needs psi(0) != 0")
    target = psi.order + 1
    t = Series([0, c0], 1)
    correct = 1
    while correct < target:
        new = min(2 * correct, target)
        guess = t.extended(new)
        psi_t = psi.extended(new - 1) if psi.order < new - 1 else psi.truncate(new - 1)
        f = guess - psi_t.compose(guess.truncate(new - 1)).shift_up(1)
        dpsi = psi_t.extended(new - 1).derivative().extended(new - 1)
        fprime = Series.one(new - 1) - dpsi.compose(guess.truncate(new - 1)).shift_up(1).truncate(new - 1)
        t = (guess - (f * fprime.extended(new).pow_rational(-1).extended(new))).truncate(new)
        correct = new
    return t


def lagrange_invert_coeff(h_prime: Series, psi: Series, p: int) -> Fraction:
    """[s^p] H(T(s)) for T = x psi(T), via (1/p) [s^(p-1)] H'(s) psi(s)^p.

    ``h_prime`` is H' as a series in the plain variable.
    """
    if p < 1:
        raise ValueError("lagrange_invert_coeff needs p >= 1")
    if psi.order < p - 1:
        raise InsufficientOrder(
            f"psi known to order {psi.order}, need at least {p - 1} for p = {p}"
        )
    if h_prime.order < p - 1:
        raise InsufficientOrder(
            f"H' known to order {h_prime.order}, need at least {p - 1} for p = {p}"
        )
    base = psi.truncate(p - 1)
    prod = h_prime.truncate(p - 1) * _unit_power(base, p)
    return prod[p - 1] / p


def _unit_power(a: Series, e: int) -> Series:
    """a**e for integer e >= 0 (binary powering, min-order preserved)."""
    result = Series.one(a.order)
    base = a
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result
