from fractions import Fraction

import pytest

from poincount import catalog
from poincount.algebra import ONE_MINUS_Z, Polynomial, RationalFunction, binom_in_k
from poincount.hilbert import (
    HilbertSpec,
    HorizonTooShort,
    NotEventuallyPolynomial,
    equal_series,
    finite_differences,
    gf_from_hilbert,
    hilbert_values_spec,
    poly_shift_arg,
    spec_from_gf,
)

P = Polynomial
RF = RationalFunction


def riemannian2_spec():
    return HilbertSpec({2: 1, 3: 1}, 4, P((-1, 1)))


def test_h_value_examples():
    spec = riemannian2_spec()
    assert spec.h(3) == 1
    assert spec.h(0) == 0  # gap below the tail defaults to zero
    self_dual = catalog.hilbert_spec("self-dual-metrics", n=4)
    # tail (1/6)(k-1)(k^2+25k+36) at k=4, cross-checked against the series
    assert self_dual.h(4) == 76
    p = catalog.claimed_poincare("self-dual-metrics", n=4)
    assert p.coefficient(4) == 76


def test_h_value_negative_index_rejected():
    with pytest.raises(ValueError):
        riemannian2_spec().h(-1)


def test_gf_from_hilbert_riemannian2():
    gf = gf_from_hilbert(riemannian2_spec())
    assert gf == RF(P((0, 0, 1, -1, 2, -1)), ONE_MINUS_Z**2)


def test_gf_from_hilbert_zero():
    assert gf_from_hilbert(HilbertSpec({}, 0, 0)) == RF.zero()


def test_gf_from_hilbert_cubic_tail():
    spec = HilbertSpec({}, 4, P((-2, 2)))  # 2(k-1) from k = 4
    assert gf_from_hilbert(spec) == RF(2 * P((0, 0, 0, 0, 3, -2)), ONE_MINUS_Z**2)


def test_spec_from_gf_ode_general():
    f = RF(P((0, 0, 0, 0, 0, 3, 2, -7, 3)), ONE_MINUS_Z**3)
    spec = spec_from_gf(f, 40)
    assert spec.exceptions == {5: 3}
    assert spec.tail_start == 6
    assert spec.tail == binom_in_k(0, 2) - 4  # k(k-1)/2 - 4


def test_spec_from_gf_rejects_other_poles():
    f = RF(1, P((1, 0, -1)) ** 2)
    with pytest.raises(NotEventuallyPolynomial):
        spec_from_gf(f, 40)


def test_spec_from_gf_zero():
    spec = spec_from_gf(RF.zero(), 10)
    assert spec == HilbertSpec({}, 0, 0)


def test_spec_from_gf_short_horizon():
    f = RF(P((0, 0, 0, 0, 0, 3, 2, -7, 3)), ONE_MINUS_Z**3)
    with pytest.raises(HorizonTooShort):
        spec_from_gf(f, 7)


def test_equal_series_full_match():
    spec = catalog.hilbert_spec("self-dual-metrics", n=4)
    p = catalog.claimed_poincare("self-dual-metrics", n=4)
    report = equal_series(p, spec, 40)
    assert report.full_match and report.matched_up_to == 40


def test_equal_series_first_mismatch():
    report = equal_series(RF(1, ONE_MINUS_Z), HilbertSpec({}, 0, 0), 10)
    assert not report.full_match
    assert report.matched_up_to == -1
    assert report.first_mismatch == (0, 0, Fraction(1))


def test_equal_series_almost_complex_table_row():
    spec = catalog.hilbert_spec("almost-complex", n=2)
    p = catalog.claimed_poincare("almost-complex", n=2)
    report = equal_series(p, spec, 6)
    assert report.full_match
    assert spec.values(6) == [0, 0, 2, 24, 60, 116, 196]


def test_round_trip_all_catalog_specs():
    for entry in catalog.list_entries():
        if entry.hilbert is None:
            continue
        for sample in entry.samples(6):
            spec = catalog.hilbert_spec(entry.id, **sample)
            gf = gf_from_hilbert(spec)
            assert spec_from_gf(gf, 60) == spec, (entry.id, sample)


def test_gf_denominator_shape_invariant():
    for entry_id, n in [("riemannian", 5), ("kaehler", 3), ("fedosov", 2)]:
        spec = catalog.hilbert_spec(entry_id, n=n)
        gf = gf_from_hilbert(spec)
        assert gf.den == ONE_MINUS_Z ** (spec.tail.degree + 1)
        assert gf.den.coefficient(0) != 0


def test_h_values_match_coefficients_to_60():
    for entry_id, n in [("riemannian", 4), ("almost-complex", 3), ("weyl", 2)]:
        spec = catalog.hilbert_spec(entry_id, n=n)
        series = gf_from_hilbert(spec).series(60)
        for k in range(61):
            assert series[k] == spec.h(k)


def test_canonicalization_minimizes_tail_start():
    # value at k = 3 agrees with the tail, so the onset pulls down to 3
    spec = HilbertSpec({3: 2}, 4, P((-1, 1)))
    assert spec.tail_start == 3
    assert spec.exceptions == {}


def test_exception_equal_to_zero_is_dropped():
    spec = HilbertSpec({1: 0, 2: 5}, 3, P((7,)))
    assert spec.exceptions == {2: 5}
    assert spec.h(1) == 0


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        HilbertSpec({5: 1}, 3, P((1,)))  # exception beyond tail_start
    with pytest.raises(ValueError):
        HilbertSpec({1: -2}, 3, P((1,)))  # negative value
    with pytest.raises(ValueError):
        HilbertSpec({}, 0, P((0, 1, -1)))  # tail negative for large k
    with pytest.raises(ValueError):
        HilbertSpec({}, 0, P((Fraction(1, 2),)))  # non-integer tail


def test_shift_down():
    spec = riemannian2_spec()
    shifted = spec.shift_down(1)
    for k in range(0, 30):
        assert shifted.h(k) == spec.h(k + 1)


def test_hilbert_values_spec_fits_polynomial_tail():
    values = [0, 0, 7, 1, 2] + [3 * k for k in range(5, 30)]
    spec = hilbert_values_spec(values)
    assert spec.values(29) == values


def test_finite_differences_and_shift_helpers():
    assert finite_differences([1, 4, 9, 16], 1) == [3, 5, 7]
    p = P((0, 0, 1))  # k^2
    q = poly_shift_arg(p, 2)  # (k+2)^2
    assert [q.evaluate(k) for k in range(4)] == [4, 9, 16, 25]
