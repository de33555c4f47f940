"""Eventually-polynomial counting sequences and their generating functions.

A HilbertSpec describes an integer sequence h(k) that agrees with a fixed
polynomial tail(k) for all k >= tail_start, with finitely many exceptional
low-order values.  Both directions of the dictionary are exact:

* gf_from_hilbert turns a spec into the rational function sum h(k) z^k,
* spec_from_gf recovers the spec from a rational function whose only pole
  is at z = 1, by finite-difference stabilization of the Taylor coefficients.

Specs are kept canonical (minimal tail_start, exceptions only where they
differ from zero), so equality of specs is plain structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .algebra import (
    ONE_MINUS_Z,
    Polynomial,
    RationalFunction,
    Scalar,
    binom_in_k,
    _poly_multiplicity,
)


class NotEventuallyPolynomial(ValueError):
    """The generating function has a unit-circle pole away from z = 1."""


class HorizonTooShort(ValueError):
    """Tail stabilization was not observed within the confirmation horizon."""


def finite_differences(values: Sequence, order: int) -> list:
    """Apply the forward difference operator `order` times."""
    out = list(values)
    for _ in range(order):
        out = [out[i + 1] - out[i] for i in range(len(out) - 1)]
    return out


def poly_shift_arg(p: Polynomial, a: Scalar) -> Polynomial:
    """The polynomial k -> p(k + a)."""
    shifted_var = Polynomial((a, 1))
    acc = Polynomial.zero()
    for c in reversed(p.coeffs):
        acc = acc * shifted_var + c
    return acc


class HilbertSpec:
    """Eventually-polynomial sequence: exceptional values plus a tail polynomial.

    h(k) = exceptions[k] if present, else 0 for k < tail_start, else tail(k).
    Construction canonicalizes: tail_start is pulled down as far as the values
    allow and exceptions store only nonzero values below it.
    """

    __slots__ = ("exceptions", "tail_start", "tail")

    def __init__(
        self,
        exceptions: Mapping[int, int] | None = None,
        tail_start: int = 0,
        tail: Polynomial | int = 0,
    ):
        if not isinstance(tail, Polynomial):
            tail = Polynomial.constant(tail)
        if tail_start < 0:
            raise ValueError("tail_start must be >= 0")
        exc = dict(exceptions or {})
        for k, v in exc.items():
            if k < 0 or k >= tail_start:
                raise ValueError(f"exceptional index {k} must lie in [0, tail_start)")
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"h({k}) = {v!r} is not a nonnegative integer")
        for k in range(tail_start, tail_start + tail.degree + 3):
            value = tail.evaluate(k)
            if value.denominator != 1 or value < 0:
                raise ValueError(f"tail({k}) = {value} is not a nonnegative integer")

        # Canonicalize: extend the tail downwards over matching values, then
        # record only the nonzero leftovers as exceptions.
        def raw(k: int) -> int:
            if k in exc:
                return exc[k]
            if k < tail_start:
                return 0
            return int(tail.evaluate(k))

        start = tail_start
        while start > 0 and Fraction(raw(start - 1)) == tail.evaluate(start - 1):
            start -= 1
        cleaned = {k: raw(k) for k in range(start) if raw(k) != 0}

        object.__setattr__(self, "exceptions", cleaned)
        object.__setattr__(self, "tail_start", start)
        object.__setattr__(self, "tail", tail)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("HilbertSpec is immutable")

    def h(self, k: int) -> int:
        """The sequence value at k >= 0."""
        if k < 0:
            raise ValueError("k must be >= 0")
        if k in self.exceptions:
            return self.exceptions[k]
        if k < self.tail_start:
            return 0
        value = self.tail.evaluate(k)
        if value.denominator != 1 or value < 0:
            raise ValueError(f"tail({k}) = {value} is not a nonnegative integer")
        return int(value)

    def values(self, k_max: int) -> list[int]:
        return [self.h(k) for k in range(k_max + 1)]

    def shift_down(self, m: int = 1) -> "HilbertSpec":
        """The spec of k -> h(k + m)."""
        if m < 0:
            raise ValueError("shift must be >= 0")
        exc = {}
        for k in range(self.tail_start):
            v = self.h(k)
            if k - m >= 0 and v != 0:
                exc[k - m] = v
        return HilbertSpec(exc, max(self.tail_start - m, 0), poly_shift_arg(self.tail, m))

    def __eq__(self, other) -> bool:
        if isinstance(other, HilbertSpec):
            return (
                self.exceptions == other.exceptions
                and self.tail_start == other.tail_start
                and self.tail == other.tail
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash(
            (
                "HilbertSpec",
                tuple(sorted(self.exceptions.items())),
                self.tail_start,
                self.tail.coeffs,
            )
        )

    def __repr__(self) -> str:
        return (
            f"HilbertSpec(exceptions={self.exceptions!r}, "
            f"tail_start={self.tail_start}, tail={self.tail.format('k')!r})"
        )


@dataclass(frozen=True)
class MatchReport:
    """Outcome of comparing a generating function against a spec up to order K."""

    matched_up_to: int
    first_mismatch: Optional[Tuple[int, int, Fraction]] = None

    @property
    def full_match(self) -> bool:
        return self.first_mismatch is None


def gf_from_hilbert(spec: HilbertSpec) -> RationalFunction:
    """The exact rational function sum_k h(k) z^k.

    The tail polynomial is decomposed in a binomial basis through its finite
    differences at the tail onset; each basis element sums to an explicit
    power of 1/(1-z), and the exceptional values contribute a polynomial.
    """
    poly_part = Polynomial(
        [spec.h(k) for k in range(spec.tail_start)]
    )
    result = RationalFunction(poly_part)
    tail = spec.tail
    if not tail.is_zero():
        k0 = spec.tail_start
        samples = [tail.evaluate(k0 + i) for i in range(tail.degree + 1)]
        total = RationalFunction.zero()
        for j in range(tail.degree + 1):
            d_j = finite_differences(samples, j)[0]
            if d_j == 0:
                continue
            # sum_{k >= k0} C(k - k0, j) z^k = z^(k0 + j) / (1 - z)^(j + 1)
            total = total + RationalFunction(
                Polynomial.monomial(k0 + j, d_j), ONE_MINUS_Z ** (j + 1)
            )
        result = result + total
    return result


def hilbert_values_spec(values: Sequence[int]) -> HilbertSpec:
    """Fit an eventually-polynomial spec to explicit sequence values.

    Finds the smallest difference order d whose d-th differences vanish on a
    suffix of length at least d + 3, interpolates the degree <= d-1 tail from
    the onset, and canonicalizes.  Raises HorizonTooShort when no order
    stabilizes within the data.
    """
    n = len(values)
    d = 0
    while n - d >= d + 3:
        diffs = finite_differences(values, d)
        j = len(diffs)
        while j > 0 and diffs[j - 1] == 0:
            j -= 1
        if len(diffs) - j >= d + 3:
            onset = j
            if d == 0:
                tail = Polynomial.zero()
            else:
                samples = values[onset : onset + d]
                tail = Polynomial.zero()
                for jj in range(d):
                    d_jj = finite_differences(samples, jj)[0]
                    tail = tail + binom_in_k(-onset, jj) * d_jj
            exc = {k: values[k] for k in range(onset) if values[k] != 0}
            spec = HilbertSpec(exc, onset, tail)
            for k in range(n):
                if spec.h(k) != values[k]:  # pragma: no cover - fit is exact
                    raise HorizonTooShort("tail fit fails to reproduce the data")
            return spec
        d += 1
    raise HorizonTooShort(
        f"no difference order stabilizes within {n} values"
    )


def spec_from_gf(f: RationalFunction, k_confirm: int) -> HilbertSpec:
    """Recover the HilbertSpec of a rational function whose only pole is z = 1.

    The pole order d bounds the tail degree by d - 1; d-th finite differences
    of the Taylor coefficients must vanish on a suffix (d + 3 consecutive
    zeros required) before the tail is declared.  The result is verified
    against every coefficient up to k_confirm and must round-trip through
    gf_from_hilbert exactly, otherwise the horizon is deemed too short.
    """
    d = _poly_multiplicity(f.den, ONE_MINUS_Z)
    residual = f.den
    for _ in range(d):
        residual = residual // ONE_MINUS_Z
    if residual.degree > 0:
        raise NotEventuallyPolynomial(
            f"denominator has a factor besides (1 - z)^d: {residual}"
        )
    series = f.series(k_confirm)
    values = []
    for c in series:
        if c.denominator != 1:
            raise NotEventuallyPolynomial(f"non-integer coefficient {c}")
        values.append(int(c))
    spec = hilbert_values_spec(values)
    if gf_from_hilbert(spec) != f:
        raise HorizonTooShort(
            f"fitted tail does not reproduce the generating function at K={k_confirm}"
        )
    return spec


def equal_series(f: RationalFunction, spec: HilbertSpec, k_max: int) -> MatchReport:
    """Compare Taylor coefficients of f with spec values for k = 0..k_max."""
    series = f.series(k_max)
    for k in range(k_max + 1):
        expected = spec.h(k)
        got = series[k]
        if got != expected:
            return MatchReport(matched_up_to=k - 1, first_mismatch=(k, expected, got))
    return MatchReport(matched_up_to=k_max)
