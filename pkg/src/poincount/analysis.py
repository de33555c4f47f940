"""Pole analysis of counting functions: functional dimension and rank.

For a counting function P the pole order d at z = 1 is the functional
dimension (moduli depend on d arguments) and sigma = lim (1-z)^d P(z) is
the functional rank (number of such functions).  conforms_to_pr records
whether the denominator is exactly (1-z)^d; the generalized closed forms
with denominators like (1-z^2)^n fail it and their extra unit-circle pole
factors are reported by cyclotomic trial division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    ONE_MINUS_Z,
    Polynomial,
    RationalFunction,
    binomial,
    cyclotomic_factors,
    _poly_multiplicity,
)


class NotPRForm(ValueError):
    """The function is not of the single-pole R(z)/(1-z)^d shape."""


@dataclass(frozen=True)
class PoleReport:
    d: int
    sigma: Fraction
    other_unit_poles: tuple[tuple[Polynomial, int], ...]
    conforms_to_pr: bool

    def pole_factor_names(self) -> list[tuple[str, int]]:
        return [(poly.format(), mult) for poly, mult in self.other_unit_poles]


def analyze(f: RationalFunction) -> PoleReport:
    """Pole order and leading constant at z = 1, plus other unit-circle poles.

    d = multiplicity of (1-z) in the denominator (0 if none); sigma is the
    exact value of (1-z)^d f at z = 1.  Remaining denominator factors are
    matched against cyclotomic polynomials of degree up to deg(den).
    """
    d = max(0, _poly_multiplicity(f.den, ONE_MINUS_Z))
    cleared = f * RationalFunction(ONE_MINUS_Z**d)
    sigma = cleared.evaluate(1)
    residual = f.den
    for _ in range(d):
        residual = residual // ONE_MINUS_Z
    others = [(phi, mult) for _, phi, mult in cyclotomic_factors(residual)]
    conforms = residual.degree == 0 and f.den.coefficient(0) != 0
    return PoleReport(
        d=d,
        sigma=sigma,
        other_unit_poles=tuple(others),
        conforms_to_pr=conforms,
    )


def s_sequence(f: RationalFunction, k_max: int) -> list[Fraction]:
    """Cumulative counts s_k = sum_{i<=k} [z^i] f, i.e. coefficients of f/(1-z)."""
    series = f.series(k_max)
    out = []
    total = Fraction(0)
    for c in series:
        total += c
        out.append(total)
    return out


def asymptotic_check(f: RationalFunction, k_probe: int = 200) -> bool:
    """Check s_K ~ sigma * C(K+d, d) at K = k_probe, exactly in rationals.

    The cumulative count of jets of sigma functions of d arguments is
    sigma*C(K+d, d); the ratio must lie within the factor (1 +/- 10/K) of
    sigma.  Requires the single-pole form (error otherwise).
    """
    report = analyze(f)
    if not report.conforms_to_pr:
        raise NotPRForm("denominator is not a power of (1 - z)")
    d = report.d
    sigma = report.sigma
    s_k = s_sequence(f, k_probe)[k_probe]
    ratio = Fraction(s_k, binomial(k_probe + d, d))
    tol = Fraction(10, k_probe)
    return abs(ratio - sigma) <= abs(sigma) * tol
