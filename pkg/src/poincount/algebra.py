"""Exact univariate polynomial and rational-function arithmetic over the rationals.

Everything here is pure and exact: coefficients are `fractions.Fraction`,
equality means identity of canonical forms, and no floating point is used
anywhere.  This module is the substrate for the generating-function work in
the rest of the package.

Canonical form of a rational function num/den:

* gcd(num, den) is constant (the quotient is reduced), and
* den(0) = 1 whenever den has a nonzero constant term, otherwise den is monic.

With that convention two rational functions are equal iff their (num, den)
coefficient tuples are equal, and Taylor coefficients at 0 fall out of a
direct linear recurrence whenever den(0) != 0.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class UnsupportedArgument(ValueError):
    """Argument outside the supported domain of an operation."""


class PoleAtOrigin(ZeroDivisionError):
    """Rational function has a pole at z = 0, so no Taylor series there."""


class PoleAtPoint(ZeroDivisionError):
    """Evaluation point is a zero of the denominator."""


def binomial(m: int, k: int) -> int:
    """Binomial coefficient C(m, k) with C(m, k) = 0 for k < 0 or 0 <= m < k.

    Negative m with k >= 0 is outside the supported domain and raises
    UnsupportedArgument.
    """
    if k < 0:
        return 0
    if m < 0:
        raise UnsupportedArgument(f"binomial({m}, {k}): negative upper argument")
    return math.comb(m, k)


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class Polynomial:
    """Dense univariate polynomial with Fraction coefficients.

    Immutable.  The zero polynomial has an empty coefficient tuple and
    degree -1; otherwise the leading coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "Polynomial":
        if degree < 0:
            raise UnsupportedArgument("monomial degree must be >= 0")
        return cls((0,) * degree + (coeff,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise UnsupportedArgument("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Polynomial", self.coeffs))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            self.coefficient(i) + other.coefficient(i) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return Polynomial(c * a for a in self.coeffs)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise UnsupportedArgument("polynomial exponent must be a nonnegative int")
        result = Polynomial.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.leading()
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] / lead
            if c != 0:
                quot[i] = c
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Polynomial(quot), Polynomial(rem)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        q, _ = divmod(self, other)
        return q

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        _, r = divmod(self, other)
        return r

    def shift(self, k: int) -> "Polynomial":
        """Multiply by z^k (k >= 0)."""
        if k < 0:
            raise UnsupportedArgument("shift must be nonnegative")
        if self.is_zero():
            return self
        return Polynomial((0,) * k + self.coeffs)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        return Polynomial(c / lead for c in self.coeffs)

    def evaluate(self, x: Scalar) -> Fraction:
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x: Scalar) -> Fraction:
        return self.evaluate(x)

    # -- display --------------------------------------------------------

    def format(self, var: str = "z") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                power = var if k == 1 else f"{var}^{k}"
                term = f"{mag}{power}"
                if c < 0:
                    term = "-" + term
            if not parts:
                parts.append(term)
            elif term.startswith("-"):
                parts.append("- " + term[1:])
            else:
                parts.append("+ " + term)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def _coerce_poly(value) -> Polynomial | None:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value)
    return None


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the rationals (Euclid); gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def binom_in_k(shift: int, r: int) -> Polynomial:
    """C(k + shift, r) as a polynomial in k: prod_{i=0}^{r-1}(k + shift - i) / r!.

    For r < 0 returns the zero polynomial (empty product convention matches
    the binomial(m, k) = 0 for k < 0 rule).
    """
    if r < 0:
        return Polynomial.zero()
    result = Polynomial.one()
    for i in range(r):
        result = result * Polynomial((shift - i, 1))
    return result * Fraction(1, math.factorial(r))


class PowerSeries:
    """Truncated Taylor series: coefficients for z^0 .. z^K, exactly K+1 of them."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[Scalar], order: int):
        cs = tuple(_as_fraction(c) for c in coeffs)
        if len(cs) != order + 1:
            raise ValueError(f"need {order + 1} coefficients, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PowerSeries is immutable")

    def __eq__(self, other) -> bool:
        if isinstance(other, PowerSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("PowerSeries", self.coeffs))

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __repr__(self) -> str:
        return f"PowerSeries({list(self.coeffs)!r}, order={self.order})"


class RationalFunction:
    """Quotient of two Polynomials in canonical (reduced, normalized) form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        if num is None or den is None:
            raise TypeError("num/den must be Polynomial, int or Fraction")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = Polynomial.zero(), Polynomial.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            c = den.coefficient(0)
            if c == 0:
                c = den.leading()
            num = num * (1 / c)
            den = den * (1 / c)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(Polynomial.zero())

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Polynomial.one())

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls(Polynomial.x())

    @classmethod
    def from_scalar(cls, c: Scalar) -> "RationalFunction":
        return cls(Polynomial.constant(c))

    # -- structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __eq__(self, other) -> bool:
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "RationalFunction":
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        other = _coerce_ratfun(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "RationalFunction":
        if not isinstance(exponent, int):
            raise UnsupportedArgument("rational-function exponent must be an int")
        if exponent < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RationalFunction(self.den ** (-exponent), self.num ** (-exponent))
        return RationalFunction(self.num**exponent, self.den**exponent)

    # -- analysis ---------------------------------------------------------

    def evaluate(self, x: Scalar) -> Fraction:
        x = _as_fraction(x)
        d = self.den.evaluate(x)
        if d == 0:
            raise PoleAtPoint(f"pole at z = {x}")
        return self.num.evaluate(x) / d

    def series(self, order: int) -> PowerSeries:
        """Taylor coefficients 0..order at z = 0, by the den * series = num recurrence."""
        if order < 0:
            raise UnsupportedArgument("series order must be >= 0")
        d0 = self.den.coefficient(0)
        if d0 == 0:
            raise PoleAtOrigin("pole at z = 0")
        out = []
        for k in range(order + 1):
            acc = self.num.coefficient(k)
            for j in range(1, min(k, self.den.degree) + 1):
                acc -= self.den.coefficient(j) * out[k - j]
            out.append(acc / d0)
        return PowerSeries(out, order)

    def coefficient(self, k: int) -> Fraction:
        """The z^k Taylor coefficient at 0 (k >= 0)."""
        if k < 0:
            raise UnsupportedArgument("coefficient index must be >= 0")
        return self.series(k)[k]

    def multiplicity(self, factor: Polynomial) -> int:
        """Order of `factor` as a pole: multiplicity in den minus multiplicity in num.

        `factor` must be non-constant (callers supply irreducible factors such
        as 1 - z, 1 + z, 1 + z + z^2).
        """
        if factor.is_constant():
            raise UnsupportedArgument("factor must be non-constant")
        return _poly_multiplicity(self.den, factor) - _poly_multiplicity(
            self.num, factor
        )

    # -- display -----------------------------------------------------------

    def format(self, var: str = "z") -> str:
        if self.den == Polynomial.one():
            return self.num.format(var)
        return f"({self.num.format(var)}) / ({self.den.format(var)})"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"


def _coerce_ratfun(value) -> RationalFunction | None:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    if isinstance(value, (int, Fraction)):
        return RationalFunction.from_scalar(value)
    return None


def _poly_multiplicity(poly: Polynomial, factor: Polynomial) -> int:
    if poly.is_zero():
        return 0
    count = 0
    while True:
        q, r = divmod(poly, factor)
        if not r.is_zero():
            return count
        poly = q
        count += 1


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> Polynomial:
    """The m-th cyclotomic polynomial (monic, integer coefficients)."""
    if m < 1:
        raise UnsupportedArgument("cyclotomic index must be >= 1")
    result = Polynomial((-1,) + (0,) * (m - 1) + (1,))  # z^m - 1
    for d in range(1, m):
        if m % d == 0:
            result = result // cyclotomic(d)
    return result


def _euler_phi(m: int) -> int:
    result = m
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def cyclotomic_factors(poly: Polynomial, skip_one: bool = True) -> list[tuple[int, Polynomial, int]]:
    """All cyclotomic factors (index, polynomial, multiplicity) of poly.

    Scans every index m whose cyclotomic degree phi(m) fits in the (still
    undivided) polynomial; phi(m) >= sqrt(m/2) bounds the scan at
    2*deg^2 + 2.  With skip_one the factor at z = 1 is omitted (callers
    usually track it separately).
    """
    out = []
    remaining = poly
    if remaining.degree < 1:
        return out
    start = 2 if skip_one else 1
    for m in range(start, 2 * poly.degree * poly.degree + 3):
        deg = remaining.degree
        if deg < 1:
            break
        if _euler_phi(m) > deg:
            continue
        phi = cyclotomic(m)
        mult = _poly_multiplicity(remaining, phi)
        if mult > 0:
            out.append((m, phi, mult))
            for _ in range(mult):
                remaining = remaining // phi
    return out


ONE_MINUS_Z = Polynomial((1, -1))
