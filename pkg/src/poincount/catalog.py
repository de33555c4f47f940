"""Built-in roster of geometric structures with exact moduli-counting data.

Each CatalogEntry couples, for one classification problem:

* a parameter schema with a validity predicate (typically the base
  dimension n, sometimes resonance integers),
* the base-manifold dimension, which bounds the pole order of the
  counting function at z = 1,
* a HilbertSpec constructor for the number h(k) of independent invariants
  of pure order k (absent for the entries that ship only a closed form),
* the claimed closed-form generating function P(z) = sum h(k) z^k.

The roster is a declarative table (CATALOG, version CATALOG_VERSION); the
schema is exactly the CatalogEntry dataclass below.  verify_entry checks,
in exact rational arithmetic, that the two constructions agree and that
the pole structure respects the base-dimension bound; any discrepancy is
returned as a structured report, never swallowed.

Entry ids follow the roster; the normal-form family `poincare-dulac` is a
single entry with a `case` parameter, reachable also through the id
aliases poincare-dulac-<case> and takens-bogdanov.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .algebra import (
    ONE_MINUS_Z,
    Polynomial,
    RationalFunction,
    binomial,
    binom_in_k,
    cyclotomic_factors,
    _poly_multiplicity,
)
from .hilbert import HilbertSpec, equal_series, gf_from_hilbert

CATALOG_VERSION = 1

OTHER_UNIT_POLES = "other-unit-circle-poles"


class UnknownEntry(ValueError):
    """No catalog entry with that id."""


class OutOfValidity(ValueError):
    """Parameters outside the entry's validity range."""


class NoHilbertData(ValueError):
    """The entry ships only a closed-form P(z), no independent h(k) data."""


_P = Polynomial
_RF = RationalFunction
_Z = Polynomial.x()
_Z2 = Polynomial.monomial(2)
_Z3 = Polynomial.monomial(3)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    title: str
    params: tuple[str, ...]
    validity_note: str
    validity: Callable[..., bool]
    base_dim: Callable[..., int]
    claimed_p: Callable[..., RationalFunction]
    hilbert: Optional[Callable[..., HilbertSpec]] = None
    flags: frozenset = frozenset()
    note: str = ""
    samples: Callable[[int], list[dict]] = lambda nmax: [{}]

    def check_params(self, params: Mapping[str, int]) -> dict:
        clean = dict(params)
        unknown = set(clean) - set(self.params)
        if unknown:
            raise OutOfValidity(f"{self.id}: unknown parameters {sorted(unknown)}")
        try:
            ok = self.validity(**clean)
        except TypeError as exc:
            raise OutOfValidity(f"{self.id}: {exc}") from None
        if not ok:
            raise OutOfValidity(
                f"{self.id}: parameters {clean} outside validity ({self.validity_note})"
            )
        return clean


@dataclass(frozen=True)
class VerificationReport:
    entry_id: str
    params: dict
    status: str  # "match" | "mismatch" | "skipped"
    detail: Optional[dict] = None

    def __post_init__(self):
        if self.status == "match" and self.detail is not None:
            raise ValueError("a match carries no detail payload")


# ---------------------------------------------------------------------------
# Hilbert-spec constructors
# ---------------------------------------------------------------------------


def _h_ode_general() -> HilbertSpec:
    return HilbertSpec({5: 3}, 6, binom_in_k(0, 2) - 4)


def _h_ode_cubic() -> HilbertSpec:
    return HilbertSpec({}, 4, _P((-2, 2)))


def _h_ode_lie_form() -> HilbertSpec:
    return HilbertSpec({4: 2}, 5, _P((-1, 1)))


def _h_riemannian(n: int) -> HilbertSpec:
    if n == 2:
        return HilbertSpec({2: 1, 3: 1}, 4, _P((-1, 1)))
    tail = binomial(n + 1, 2) * binom_in_k(n - 1, n - 1) - n * binom_in_k(n, n - 1)
    return HilbertSpec({2: binomial(n, 3) * (n + 3) // 2}, 3, tail)


def _h_einstein(n: int) -> HilbertSpec:
    if n <= 3:
        return HilbertSpec({2: 1}, 3, 0)
    # tail = n (k-1)(n+k-1)(n+2k-2) / (2(k+1)(n-2)) * C(n+k-4, k); the (k+1)
    # always divides the product exactly
    poly = (
        _P((-1, 1))
        * _P((n - 1, 1))
        * _P((n - 2, 2))
        * binom_in_k(n - 4, n - 4)
        * Fraction(n, 2 * (n - 2))
    )
    tail, rem = divmod(poly, _P((1, 1)))
    assert rem.is_zero()
    return HilbertSpec({2: (n * n - 1) * (n * n - 12) // 12}, 3, tail)


def _h_self_dual_metrics(n: int) -> HilbertSpec:
    tail = _P((-1, 1)) * _P((36, 25, 1)) * Fraction(1, 6)
    return HilbertSpec({2: 9}, 3, tail)


def _h_kaehler(n: int) -> HilbertSpec:
    if n == 1:
        return _h_riemannian(2)
    tail = (
        binom_in_k(2 * n + 1, 2 * n - 1)
        - 2 * binom_in_k(n + 1, n - 1)
        - 2 * n * binom_in_k(n, n - 1)
    )
    return HilbertSpec({2: n * n * (n - 1) * (n + 3) // 4}, 3, tail)


def _h_hyper_kaehler(n: int) -> HilbertSpec:
    tail = Polynomial.zero()
    for i in range(n + 1):
        tail = tail + 2 * (n - i) * binom_in_k(2 * n - i, 2 * n - i)
    tail = tail - binom_in_k(2 * n + 1, 2 * n - 1) - 2 * binom_in_k(n + 1, n - 1)
    return HilbertSpec({2: n * (n + 3) * (2 * n - 1) * (2 * n + 1) // 6}, 3, tail)


def _h_linear_connections(n: int) -> HilbertSpec:
    if n == 2:
        return HilbertSpec({1: 6}, 2, _P((2, 6)))
    tail = n**3 * binom_in_k(n - 1, n - 1) - n * binom_in_k(n + 1, n - 1)
    return HilbertSpec({0: n * n * (n - 3) // 2}, 1, tail)


def _h_symmetric_connections(n: int) -> HilbertSpec:
    tail = n * binomial(n + 1, 2) * binom_in_k(n - 1, n - 1) - n * binom_in_k(
        n + 1, n - 1
    )
    h1 = n * n * (n * n - 4) // 3 + (1 if n == 2 else 0)
    exc = {1: h1}
    start = 2
    if n == 2:
        exc[2] = n * binomial(n + 1, 2) ** 2 - n * binomial(n + 3, 4) - 1
        start = 3
    return HilbertSpec(exc, start, tail)


def _h_metric_connections(n: int) -> HilbertSpec:
    tail = (
        binomial(n + 1, 2) * binom_in_k(n, n - 1)
        + n * binomial(n, 2) * binom_in_k(n - 1, n - 1)
        - n * binom_in_k(n + 1, n - 1)
    )
    return HilbertSpec({0: n * (n - 1) ** 2 // 2}, 1, tail)


def _h_metrizable(n: int) -> HilbertSpec:
    return _h_riemannian(n).shift_down(1)


def _h_fedosov(n: int) -> HilbertSpec:
    N = 2 * n
    tail = binomial(N + 2, 3) * binom_in_k(N - 1, N - 1) - binom_in_k(N + 2, N - 1)
    h1 = (n - 1) * n * (2 * n + 1) * (2 * n + 3) // 2 + (1 if n == 1 else 0)
    h2 = n * (n + 1) * (3 * n + 2) * (4 * n * n - 1) // 5 - (1 if n == 1 else 0)
    return HilbertSpec({1: h1, 2: h2}, 3, tail)


def _h_projective(n: int) -> HilbertSpec:
    if n == 2:
        return _h_ode_cubic()
    tail = (n - 1) * n * (n + 2) // 2 * binom_in_k(n - 1, n - 1) - n * binom_in_k(
        n + 1, n - 1
    )
    exc = {
        1: n * n * (n * n - 7) // 3,
        2: n * (n - 2) * (5 * n**3 + 16 * n * n + 15 * n + 12) // 24,
    }
    return HilbertSpec(exc, 3, tail)


def _h_conformal(n: int) -> HilbertSpec:
    if n == 3:
        return HilbertSpec({3: 1, 4: 9}, 5, _P((-4, 0, 1)))
    tail = (binomial(n + 1, 2) - 1) * binom_in_k(n - 1, n - 1) - n * binom_in_k(
        n, n - 1
    )
    exc = {
        2: n * n * (n * n - 1) // 12 - n * n - 1,
        3: n * (n**4 + 2 * n**3 - 5 * n * n - 14 * n - 32) // 24,
    }
    return HilbertSpec(exc, 4, tail)


def _h_weyl(n: int) -> HilbertSpec:
    tail = (
        (binomial(n + 1, 2) - 1) * binom_in_k(n, n - 1)
        + n * binom_in_k(n - 1, n - 1)
        - n * binom_in_k(n + 1, n - 1)
    )
    d2 = 1 if n == 2 else 0
    exc = {
        1: (n * n - 4) * (n * n + 3) // 12 + d2,
        2: n * (n * n - 1) * (n * n + 2 * n + 8) // 24 - d2,
    }
    return HilbertSpec(exc, 3, tail)


def _h_einstein_weyl(n: int) -> HilbertSpec:
    conf = binomial(n + 1, 2) - 1
    tail = (
        conf * binom_in_k(n, n - 1)
        + n * binom_in_k(n - 1, n - 1)
        - conf * binom_in_k(n - 2, n - 1)
        - n * binom_in_k(n + 1, n - 1)
    )
    d3 = 1 if n == 3 else 0
    exc = {
        1: (n - 3) * n * (n + 1) * (n + 2) // 12 + d3,
        2: n * (n - 1) * (n - 2) * (n * n + 5 * n + 8) // 24 - d3,
    }
    return HilbertSpec(exc, 3, tail)


def _h_self_dual_conformal(n: int) -> HilbertSpec:
    return HilbertSpec({2: 1, 3: 13}, 4, _P((-7, 0, 3)))


def _h_almost_complex(n: int) -> HilbertSpec:
    N = 2 * n
    if n == 2:
        tail = 8 * binom_in_k(3, 3) - 4 * binom_in_k(4, 3) + 4
        return HilbertSpec({2: 2}, 3, tail)
    tail = (
        2 * n * n * binom_in_k(N - 1, N - 1)
        - 2 * n * binom_in_k(N, N - 1)
        + 2 * n * binom_in_k(n, n - 1)
        - 2 * n * binom_in_k(n - 1, n - 1)
    )
    if n == 3:
        return HilbertSpec({1: 2, 2: 64}, 3, tail)
    return HilbertSpec({}, 1, tail)


# ---------------------------------------------------------------------------
# Closed-form P(z) constructors
# ---------------------------------------------------------------------------


def _p_ode_general() -> RationalFunction:
    return _RF(_P((0, 0, 0, 0, 0, 3, 2, -7, 3)), ONE_MINUS_Z**3)


def _p_ode_cubic() -> RationalFunction:
    return _RF(_P((0, 0, 0, 0, 6, -4)), ONE_MINUS_Z**2)


def _p_ode_lie_form() -> RationalFunction:
    return _RF(_P((0, 0, 0, 0, 2, 0, -1)), ONE_MINUS_Z**2)


def _p_riemannian(n: int) -> RationalFunction:
    if n == 2:
        return _RF(_P((0, 0, 1, -1, 2, -1)), ONE_MINUS_Z**2)
    return (
        _RF(n, _Z)
        + binomial(n, 2) * _RF(_P((1, 0, -1)))
        - _RF(1, ONE_MINUS_Z**n) * (_RF(n, _Z) - binomial(n + 1, 2))
    )


def _p_einstein(n: int) -> RationalFunction:
    if n <= 3:
        return _RF(_Z2)
    return (
        _RF(
            n * _P((1, 1)) * _P((-2, n + 1, -2)),
            Polynomial.monomial(1, 2) * ONE_MINUS_Z ** (n - 1),
        )
        + binomial(n, 2) * _RF(_P((1, 0, -1)))
        + _RF(n, _Z)
        + _RF(_Z2)
    )


def _p_self_dual_metrics(n: int) -> RationalFunction:
    return _RF(_P((0, 0, 9, 4, -30, 24, -6)), ONE_MINUS_Z**4)


def _p_kaehler(n: int) -> RationalFunction:
    if n == 1:
        return _p_riemannian(2)
    return (
        _RF(1, _Z2 * ONE_MINUS_Z ** (2 * n))
        - _RF(2 * _P((1, n)), _Z2 * ONE_MINUS_Z**n)
        + n * n * _RF(_P((1, 0, -1)))
        + _RF(_P((1, 2 * n)), _Z2)
    )


def _p_hyper_kaehler(n: int) -> RationalFunction:
    return (
        _RF(2 * n, _Z * ONE_MINUS_Z ** (2 * n + 1))
        - _RF(3, _Z2 * ONE_MINUS_Z ** (2 * n))
        + n * (2 * n + 1) * _RF(_P((1, 0, -1)))
        + _RF(_P((3, 4 * n)), _Z2)
    )


def _p_linear_connections(n: int) -> RationalFunction:
    if n == 2:
        return _RF(_P((0, 6, 2, -2)), ONE_MINUS_Z**2)
    return (
        _RF(n * _P((-1, 0, n * n)), _Z2 * ONE_MINUS_Z**n)
        - n * n
        + _RF(n * _P((1, n)), _Z2)
    )


def _p_symmetric_connections(n: int) -> RationalFunction:
    if n == 2:
        return _RF(_P((0, 1, 5, -1, -1)), ONE_MINUS_Z**2)
    return (
        _RF(n * _P((-2, 0, n * (n + 1))), 2 * _Z2 * ONE_MINUS_Z**n)
        - _RF(_P((0, n * n)))
        + _RF(n * _P((1, n)), _Z2)
    )


def _p_metric_connections(n: int) -> RationalFunction:
    c2 = binomial(n, 2)
    return _RF(_P((n, c2, -c2)), _Z2) - _RF(
        _P((2 * n, -n * (n + 1), -n * n * (n - 1))), 2 * _Z2 * ONE_MINUS_Z**n
    )


_SKEW_TORSION_STABILIZER = {3: 3, 4: 3, 5: 2}


def skew_torsion_stabilizer(n: int) -> int:
    """Generic 3-form stabilizer dimension in the orthogonal group."""
    if n < 3:
        raise OutOfValidity("skew torsion needs n >= 3")
    return _SKEW_TORSION_STABILIZER.get(n, 0)


def _p_skew_torsion(n: int) -> RationalFunction:
    c2 = binomial(n, 2)
    return (
        _RF(_P((n, c2, -c2)), _Z2)
        - _RF(
            _P((n, -binomial(n + 1, 2), -binomial(n, 3))), _Z2 * ONE_MINUS_Z**n
        )
        + skew_torsion_stabilizer(n) * _RF(ONE_MINUS_Z)
    )


def _p_metrizable(n: int) -> RationalFunction:
    return _p_riemannian(n) / _RF(_Z)


def _p_fedosov(n: int) -> RationalFunction:
    if n == 1:
        return _RF(_P((0, 1, 3, 0, -1)), ONE_MINUS_Z**2)
    m = n * (2 * n + 1)
    return _RF(
        _P((-3, 0, 0, 2 * n * (2 * n * n + 3 * n + 1))),
        3 * _Z3 * ONE_MINUS_Z ** (2 * n),
    ) + _RF(_P((1, 2 * n, m, 0, -m)), _Z3)


def _p_projective(n: int) -> RationalFunction:
    if n == 2:
        return _p_ode_cubic()
    return _RF(n, ONE_MINUS_Z**n) * (
        binomial(n + 1, 2) - _RF(_P((1, 0, 1)), _Z2)
    ) - n * (_RF(_P((-1, n, 1))) - _RF(_P((1, n)), _Z2))


def _p_conformal(n: int) -> RationalFunction:
    if n == 3:
        return _RF(_Z3 * _P((1, 1)) * _P((1, 5, -8, 3)), ONE_MINUS_Z**3)
    return (
        _RF(_P((-2 * n, n * n + n - 2)), 2 * _Z * ONE_MINUS_Z**n)
        + _RF(n, _Z)
        + _RF(_P((1 + binomial(n, 2), n)) * _P((1, 0, -1)))
    )


def _p_weyl(n: int) -> RationalFunction:
    c = binomial(n, 2) + 1
    result = _RF(
        _P((-n, binomial(n + 1, 2) - 1, n)), _Z2 * ONE_MINUS_Z**n
    ) - _RF(_P((-n, -c, 0, c)), _Z2)
    if n == 2:
        result = result - _RF(_P((0, -1, 1)))
    return result


def _p_einstein_weyl(n: int) -> RationalFunction:
    if n == 3:
        return _RF(_P((0, 1, 5, -1, -1)), ONE_MINUS_Z**2)
    conf = binomial(n + 1, 2) - 1
    c = binomial(n, 2) + 1
    return _RF(
        _P((-n, conf, n, -conf)), _Z2 * ONE_MINUS_Z**n
    ) - _RF(_P((-n, -c, 0, c)), _Z2)


def _p_self_dual_conformal(n: int) -> RationalFunction:
    return _RF(_P((0, 0, 1, 10, 5, -17, 7)), ONE_MINUS_Z**3)


def _p_almost_complex(n: int) -> RationalFunction:
    if n == 2:
        return _RF(2 * _P((0, 0, 1, 8, -12, 6, -1)), ONE_MINUS_Z**4)
    if n == 3:
        return _RF(
            2 * _P((0, 1, 26, -36, 10, 17, -18, 7, -1)), ONE_MINUS_Z**6
        )
    return (
        _RF(2 * n * _P((-1, n)), _Z * ONE_MINUS_Z ** (2 * n))
        + _RF(2 * n, _Z * ONE_MINUS_Z ** (n - 1))
        + 2 * n
    )


def _p_hamiltonian_critical(n: int) -> RationalFunction:
    return _RF(1, _P((1, 0, -1)) ** n)


_PD_CASES = (
    "nonresonant",
    "poincare-domain",
    "saddle",
    "saddle-node",
    "takens-bogdanov",
)


def _pd_params(case: str, m: int | None, p: int | None, q: int | None) -> bool:
    if case == "nonresonant" or case == "takens-bogdanov":
        return m is None and p is None and q is None
    if case == "poincare-domain":
        return m is not None and m > 1 and p is None and q is None
    if case == "saddle":
        return p is not None and q is not None and p >= 1 and q >= 1 and m is None
    if case == "saddle-node":
        return m is not None and m >= 1 and p is None and q is None
    return False


def _p_poincare_dulac(case: str, m=None, p=None, q=None) -> RationalFunction:
    if case == "nonresonant":
        return _RF(_P((0, 2)))
    if case == "poincare-domain":
        return _RF(Polynomial.x() + Polynomial.monomial(m))
    if case == "saddle":
        mm = p + q
        return _RF(
            Polynomial.x()
            + Polynomial.monomial(mm + 1)
            + Polynomial.monomial(2 * mm + 1)
        )
    if case == "saddle-node":
        return _RF(
            Polynomial.x() - Polynomial.monomial(m + 1), ONE_MINUS_Z
        ) + _RF(Polynomial.monomial(2 * m + 1))
    if case == "takens-bogdanov":
        return _RF(_P((1, 1, 1, 0, -1)) * _Z2, _P((1, 0, 0, -1)))
    raise OutOfValidity(f"unknown Poincare-Dulac case {case!r}; known: {_PD_CASES}")


# ---------------------------------------------------------------------------
# The roster
# ---------------------------------------------------------------------------


def _n_samples(n_min: int):
    return lambda nmax: [{"n": n} for n in range(n_min, nmax + 1)]


def _fixed_samples(values: list[dict]):
    return lambda nmax: list(values)


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        id="ode-general",
        title="Generic 2nd-order ODE modulo point transformations",
        params=(),
        validity_note="no parameters",
        validity=lambda: True,
        base_dim=lambda: 4,
        hilbert=lambda: _h_ode_general(),
        claimed_p=lambda: _p_ode_general(),
    ),
    CatalogEntry(
        id="ode-cubic",
        title="2nd-order ODE cubic in the first derivative",
        params=(),
        validity_note="no parameters",
        validity=lambda: True,
        base_dim=lambda: 2,
        hilbert=lambda: _h_ode_cubic(),
        claimed_p=lambda: _p_ode_cubic(),
    ),
    CatalogEntry(
        id="ode-lie-form",
        title="2nd-order ODE y'' = f(x, y)",
        params=(),
        validity_note="no parameters",
        validity=lambda: True,
        base_dim=lambda: 2,
        hilbert=lambda: _h_ode_lie_form(),
        claimed_p=lambda: _p_ode_lie_form(),
    ),
    CatalogEntry(
        id="riemannian",
        title="Riemannian metrics",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_riemannian,
        claimed_p=_p_riemannian,
        samples=_n_samples(2),
        note="signature does not affect the count",
    ),
    CatalogEntry(
        id="einstein",
        title="Einstein metrics",
        params=("n",),
        validity_note="n >= 2; degenerate (single order-2 modulus) for n = 2, 3",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_einstein,
        claimed_p=_p_einstein,
        samples=_n_samples(4),
        note="nontrivial moduli only for n >= 4",
    ),
    CatalogEntry(
        id="self-dual-metrics",
        title="Self-dual metrics in 4D",
        params=("n",),
        validity_note="n = 4",
        validity=lambda n=4: n == 4,
        base_dim=lambda n=4: 4,
        hilbert=_h_self_dual_metrics,
        claimed_p=_p_self_dual_metrics,
        samples=_fixed_samples([{"n": 4}]),
    ),
    CatalogEntry(
        id="kaehler",
        title="Kaehler metrics (real dimension 2n)",
        params=("n",),
        validity_note="n >= 1",
        validity=lambda n: n >= 1,
        base_dim=lambda n: 2 * n,
        hilbert=_h_kaehler,
        claimed_p=_p_kaehler,
        samples=_n_samples(1),
        note="n = 1 coincides with 2D Riemannian metrics",
    ),
    CatalogEntry(
        id="hyper-kaehler",
        title="Hyper-Kaehler metrics (real dimension 4n)",
        params=("n",),
        validity_note="n >= 1",
        validity=lambda n: n >= 1,
        base_dim=lambda n: 4 * n,
        hilbert=_h_hyper_kaehler,
        claimed_p=_p_hyper_kaehler,
        samples=_n_samples(1),
    ),
    CatalogEntry(
        id="linear-connections",
        title="Linear connections",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_linear_connections,
        claimed_p=_p_linear_connections,
        samples=_n_samples(2),
    ),
    CatalogEntry(
        id="symmetric-connections",
        title="Symmetric linear connections",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_symmetric_connections,
        claimed_p=_p_symmetric_connections,
        samples=_n_samples(2),
    ),
    CatalogEntry(
        id="metric-connections",
        title="Metric connections (metric plus compatible connection)",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_metric_connections,
        claimed_p=_p_metric_connections,
        samples=_n_samples(2),
    ),
    CatalogEntry(
        id="metric-connections-skew-torsion",
        title="Metric connections with totally skew torsion",
        params=("n",),
        validity_note="n >= 3",
        validity=lambda n: n >= 3,
        base_dim=lambda n: n,
        claimed_p=_p_skew_torsion,
        samples=_n_samples(3),
        note="closed form only; the generic 3-form stabilizer sequence is 3, 3, 2, 0, ...",
    ),
    CatalogEntry(
        id="metrizable-connections",
        title="Metrizable symmetric connections",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_metrizable,
        claimed_p=_p_metrizable,
        samples=_n_samples(2),
        note="count equals the metric count shifted one order down (P/z)",
    ),
    CatalogEntry(
        id="fedosov",
        title="Fedosov structures (symplectic form plus symplectic connection)",
        params=("n",),
        validity_note="n >= 1 (real dimension 2n)",
        validity=lambda n: n >= 1,
        base_dim=lambda n: 2 * n,
        hilbert=_h_fedosov,
        claimed_p=_p_fedosov,
        samples=_n_samples(1),
    ),
    CatalogEntry(
        id="projective-connections",
        title="Projective connections",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_projective,
        claimed_p=_p_projective,
        samples=_n_samples(2),
        note="n = 2 coincides with cubic 2nd-order ODEs",
    ),
    CatalogEntry(
        id="conformal",
        title="Conformal metric structures",
        params=("n",),
        validity_note="n >= 3",
        validity=lambda n: n >= 3,
        base_dim=lambda n: n,
        hilbert=_h_conformal,
        claimed_p=_p_conformal,
        samples=_n_samples(3),
    ),
    CatalogEntry(
        id="weyl",
        title="Weyl conformal structures",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: n,
        hilbert=_h_weyl,
        claimed_p=_p_weyl,
        samples=_n_samples(2),
    ),
    CatalogEntry(
        id="einstein-weyl",
        title="Einstein-Weyl structures",
        params=("n",),
        validity_note="n >= 3",
        validity=lambda n: n >= 3,
        base_dim=lambda n: n,
        hilbert=_h_einstein_weyl,
        claimed_p=_p_einstein_weyl,
        samples=_n_samples(3),
    ),
    CatalogEntry(
        id="self-dual-conformal",
        title="Self-dual conformal structures in 4D",
        params=("n",),
        validity_note="n = 4",
        validity=lambda n=4: n == 4,
        base_dim=lambda n=4: 4,
        hilbert=_h_self_dual_conformal,
        claimed_p=_p_self_dual_conformal,
        samples=_fixed_samples([{"n": 4}]),
    ),
    CatalogEntry(
        id="almost-complex",
        title="Almost complex structures (real dimension 2n)",
        params=("n",),
        validity_note="n >= 2",
        validity=lambda n: n >= 2,
        base_dim=lambda n: 2 * n,
        hilbert=_h_almost_complex,
        claimed_p=_p_almost_complex,
        samples=_n_samples(2),
        note="infinite-type structure; first nontrivial such count",
    ),
    CatalogEntry(
        id="hamiltonian-critical",
        title="Critical linearly-stable Hamiltonians modulo symplectomorphisms",
        params=("n",),
        validity_note="n >= 1 (real dimension 2n)",
        validity=lambda n: n >= 1,
        base_dim=lambda n: 2 * n,
        claimed_p=_p_hamiltonian_critical,
        flags=frozenset({OTHER_UNIT_POLES}),
        samples=_n_samples(1),
        note="closed form only; poles at both z = 1 and z = -1",
    ),
    CatalogEntry(
        id="poincare-dulac",
        title="Poincare-Dulac normal forms of planar vector fields",
        params=("case", "m", "p", "q"),
        validity_note=(
            "case in {nonresonant, poincare-domain (m > 1), saddle (p, q >= 1), "
            "saddle-node (m >= 1), takens-bogdanov}"
        ),
        validity=lambda case, m=None, p=None, q=None: case in _PD_CASES
        and _pd_params(case, m, p, q),
        base_dim=lambda case, m=None, p=None, q=None: 2,
        claimed_p=_p_poincare_dulac,
        flags=frozenset({OTHER_UNIT_POLES}),
        samples=_fixed_samples(
            [
                {"case": "nonresonant"},
                {"case": "poincare-domain", "m": 2},
                {"case": "poincare-domain", "m": 3},
                {"case": "saddle", "p": 1, "q": 1},
                {"case": "saddle", "p": 1, "q": 2},
                {"case": "saddle-node", "m": 1},
                {"case": "saddle-node", "m": 2},
                {"case": "takens-bogdanov"},
            ]
        ),
        note="closed forms only; the takens-bogdanov case has a pole at the cube roots of unity",
    ),
)

_BY_ID = {entry.id: entry for entry in CATALOG}

#: id aliases resolving to (entry id, implied parameters)
ID_ALIASES: dict[str, tuple[str, dict]] = {
    f"poincare-dulac-{case}": ("poincare-dulac", {"case": case})
    for case in _PD_CASES
}
ID_ALIASES["takens-bogdanov"] = ("poincare-dulac", {"case": "takens-bogdanov"})


def list_entries() -> tuple[CatalogEntry, ...]:
    """The roster, in its stable documented order."""
    return CATALOG


def resolve(entry_id: str) -> tuple[CatalogEntry, dict]:
    """Look up an entry by id or alias; aliases imply parameters."""
    if entry_id in _BY_ID:
        return _BY_ID[entry_id], {}
    if entry_id in ID_ALIASES:
        canonical, implied = ID_ALIASES[entry_id]
        return _BY_ID[canonical], dict(implied)
    raise UnknownEntry(f"unknown catalog entry {entry_id!r}")


def get_entry(entry_id: str) -> CatalogEntry:
    return resolve(entry_id)[0]


def _prepare(entry_id: str, params: Mapping[str, int]) -> tuple[CatalogEntry, dict]:
    entry, implied = resolve(entry_id)
    merged = {**implied, **dict(params)}
    return entry, entry.check_params(merged)


def hilbert_spec(entry_id: str, **params) -> HilbertSpec:
    """The entry's counting sequence as a HilbertSpec."""
    entry, clean = _prepare(entry_id, params)
    if entry.hilbert is None:
        raise NoHilbertData(
            f"{entry.id} ships only a closed-form P(z); "
            "derive a spec via hilbert.spec_from_gf if needed"
        )
    return entry.hilbert(**clean)


def claimed_poincare(entry_id: str, **params) -> RationalFunction:
    """The entry's claimed closed-form generating function."""
    entry, clean = _prepare(entry_id, params)
    return entry.claimed_p(**clean)


def base_dimension(entry_id: str, **params) -> int:
    entry, clean = _prepare(entry_id, params)
    return entry.base_dim(**clean)


def _unit_pole_factors(den: Polynomial) -> list[tuple[Polynomial, int]]:
    return [(phi, mult) for _, phi, mult in cyclotomic_factors(den, skip_one=False)]


def verify_entry(entry_id: str, params: Mapping[str, int], k_max: int) -> VerificationReport:
    """Exact consistency check of one entry at one parameter point.

    With h(k) data: the generating function built from the spec must equal
    the claimed closed form as a canonical rational function AND coefficient
    by coefficient up to k_max.  Always: no pole at z = 0, pole order at
    z = 1 bounded by the base dimension, and (unless the entry is flagged
    for other unit-circle poles) the denominator is exactly (1-z)^d.
    """
    entry, clean = _prepare(entry_id, params)
    p = entry.claimed_p(**clean)
    problems = {}

    if p.den.coefficient(0) == 0:
        problems["pole_at_origin"] = str(p.den)
    d = max(0, _poly_multiplicity(p.den, ONE_MINUS_Z))
    base = entry.base_dim(**clean)
    if d > base:
        problems["pole_order_exceeds_base_dim"] = {"d": d, "base_dim": base}
    residual = p.den
    for _ in range(d):
        residual = residual // ONE_MINUS_Z
    pr_form = residual.degree == 0
    if not pr_form and OTHER_UNIT_POLES not in entry.flags:
        problems["unexpected_unit_poles"] = [
            (f.format(), mult) for f, mult in _unit_pole_factors(residual)
        ]

    if entry.hilbert is None:
        detail = {
            "reason": "no-hilbert-data",
            "pole_order": d,
            "pole_factors": [(f.format(), m) for f, m in _unit_pole_factors(p.den)],
        }
        if problems:
            detail["problems"] = problems
            return VerificationReport(entry.id, clean, "mismatch", detail)
        return VerificationReport(entry.id, clean, "skipped", detail)

    spec = entry.hilbert(**clean)
    gf = gf_from_hilbert(spec)
    if gf != p:
        problems["gf_mismatch"] = {"from_hilbert": str(gf), "claimed": str(p)}
    report = equal_series(p, spec, k_max)
    if not report.full_match:
        k, expected, got = report.first_mismatch
        problems["series_mismatch"] = {"k": k, "expected": expected, "got": str(got)}
    if p.coefficient(0) != spec.h(0):
        problems["h0_mismatch"] = {"coeff": str(p.coefficient(0)), "h0": spec.h(0)}

    if problems:
        return VerificationReport(entry.id, clean, "mismatch", problems)
    return VerificationReport(entry.id, clean, "match")


def verify_all(k_max: int = 50, nmax: int = 8) -> list[VerificationReport]:
    """verify_entry over the whole roster, deterministic order."""
    reports = []
    for entry in CATALOG:
        for sample in entry.samples(nmax):
            reports.append(verify_entry(entry.id, sample, k_max))
    return reports
