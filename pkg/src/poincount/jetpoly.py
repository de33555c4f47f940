"""Sparse multivariate polynomials over the rationals, and exact rank.

A polynomial maps monomials to Fraction coefficients; a monomial is a
sorted tuple of (variable index, exponent) pairs, so the variable universe
can grow without rewriting keys.  Everything is exact; these are the
workhorses of the jet-prolongation engine, where expressions live in a few
dozen jet coordinates and stay small.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

Monomial = tuple[tuple[int, int], ...]

_ZERO = Fraction(0)


class Poly:
    """Sparse polynomial: {monomial: coefficient}, zero terms never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        cleaned = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    cleaned[mono] = coeff
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def constant(cls, value) -> "Poly":
        return cls({(): Fraction(value)})

    @classmethod
    def variable(cls, var: int) -> "Poly":
        return cls({((var, 1),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Fraction:
        """The value if the polynomial is constant; error otherwise."""
        if not self.terms:
            return _ZERO
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        raise ValueError("polynomial is not constant")

    def variables(self) -> set[int]:
        seen: set[int] = set()
        for mono in self.terms:
            for var, _ in mono:
                seen.add(var)
        return seen

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono, _ZERO) + coeff
            if acc:
                out[mono] = acc
            else:
                out.pop(mono, None)
        return _wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return _wrap({mono: -coeff for mono, coeff in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly.zero()
            return _wrap({mono: c * coeff for mono, coeff in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mul_monomials(m1, m2)
                acc = out.get(mono, _ZERO) + c1 * c2
                if acc:
                    out[mono] = acc
                else:
                    out.pop(mono, None)
        return _wrap(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial exponent must be a nonnegative int")
        result = Poly.constant(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def diff(self, var: int) -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            for idx, (v, e) in enumerate(mono):
                if v == var:
                    if e == 1:
                        new = mono[:idx] + mono[idx + 1 :]
                    else:
                        new = mono[:idx] + ((v, e - 1),) + mono[idx + 1 :]
                    acc = out.get(new, _ZERO) + coeff * e
                    if acc:
                        out[new] = acc
                    else:
                        out.pop(new, None)
                    break
        return _wrap(out)

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        total = _ZERO
        for mono, coeff in self.terms.items():
            term = coeff
            for var, exp in mono:
                v = values.get(var)
                if v is None:
                    raise KeyError(f"no value for variable #{var}")
                if v == 0:
                    term = _ZERO
                    break
                term *= v**exp
            total += term
        return total

    def substitute(self, values: Mapping[int, Fraction]) -> "Poly":
        """Partially evaluate the given variables, keeping the rest symbolic."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            kept = []
            c = coeff
            for var, exp in mono:
                if var in values:
                    v = values[var]
                    if v == 0:
                        c = _ZERO
                        break
                    c *= v**exp
                else:
                    kept.append((var, exp))
            if not c:
                continue
            key = tuple(kept)
            acc = out.get(key, _ZERO) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return _wrap(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        bits = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            factors = [f"v{var}^{exp}" if exp > 1 else f"v{var}" for var, exp in mono]
            bits.append(f"{c}*" + "*".join(factors) if factors else str(c))
        return "Poly(" + " + ".join(bits) + ")"


def _wrap(terms: dict[Monomial, Fraction]) -> Poly:
    p = Poly.__new__(Poly)
    object.__setattr__(p, "terms", terms)
    return p


def _coerce(value) -> Poly | None:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.constant(value)
    return None


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for var, exp in b:
        merged[var] = merged.get(var, 0) + exp
    return tuple(sorted(merged.items()))


class RationalPair:
    """num/den pair of Polys for parsing rational jet expressions.

    No gcd reduction is attempted (evaluation-based use only); the exact
    value at a point is num(pt)/den(pt) with the caller checking den != 0.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.constant(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("RationalPair is immutable")

    @classmethod
    def constant(cls, value) -> "RationalPair":
        return cls(Poly.constant(value))

    def __add__(self, other) -> "RationalPair":
        other = _coerce_pair(other)
        if other is None:
            return NotImplemented
        return RationalPair(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalPair":
        return RationalPair(-self.num, self.den)

    def __sub__(self, other) -> "RationalPair":
        other = _coerce_pair(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalPair":
        other = _coerce_pair(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RationalPair":
        other = _coerce_pair(other)
        if other is None:
            return NotImplemented
        return RationalPair(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalPair":
        other = _coerce_pair(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero expression")
        return RationalPair(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalPair":
        other = _coerce_pair(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "RationalPair":
        if not isinstance(exponent, int):
            raise ValueError("exponent must be an int")
        if exponent < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RationalPair(self.den ** (-exponent), self.num ** (-exponent))
        return RationalPair(self.num**exponent, self.den**exponent)


def _coerce_pair(value) -> RationalPair | None:
    if isinstance(value, RationalPair):
        return value
    if isinstance(value, Poly):
        return RationalPair(value)
    if isinstance(value, (int, Fraction)):
        return RationalPair.constant(value)
    return None


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a matrix of rationals via fraction-free elimination.

    Rows are scaled to integers (rank-preserving), then reduced by the
    Bareiss one-step method, which keeps all intermediate entries integral
    and of moderate size.
    """
    mat: list[list[int]] = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        if all(x == 0 for x in fracs):
            continue
        scale = 1
        for x in fracs:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        ints = [int(x * scale) for x in fracs]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        mat.append(ints)
    if not mat:
        return 0
    n_rows = len(mat)
    n_cols = len(mat[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot_row = None
        for r in range(rank, n_rows):
            if mat[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        piv = mat[rank][col]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                mat[r][c] = (mat[r][c] * piv - mat[r][col] * mat[rank][c]) // prev
            mat[r][col] = 0
        prev = piv
        rank += 1
        if rank == n_rows:
            break
    return rank
