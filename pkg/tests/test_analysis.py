from fractions import Fraction

import pytest

from poincount import catalog
from poincount.algebra import ONE_MINUS_Z, Polynomial, RationalFunction, binomial
from poincount.analysis import NotPRForm, analyze, asymptotic_check, s_sequence

P = Polynomial
RF = RationalFunction


def test_analyze_riemannian_4d():
    report = analyze(catalog.claimed_poincare("riemannian", n=4))
    assert report.d == 4
    assert report.sigma == binomial(4, 2) == 6
    assert report.conforms_to_pr
    assert report.other_unit_poles == ()


def test_analyze_riemannian_2d():
    report = analyze(catalog.claimed_poincare("riemannian", n=2))
    assert report.d == 2 and report.sigma == 1


def test_analyze_hamiltonian_2d():
    report = analyze(catalog.claimed_poincare("hamiltonian-critical", n=2))
    assert report.d == 2
    assert report.sigma == Fraction(1, 4)
    assert not report.conforms_to_pr
    assert report.pole_factor_names() == [("1 + z", 2)]


def test_analyze_zero_and_polynomial():
    report = analyze(RF.zero())
    assert report.d == 0 and report.sigma == 0 and report.conforms_to_pr
    report = analyze(RF(P((0, 2))))
    assert report.d == 0 and report.sigma == 2 and report.conforms_to_pr


def test_s_sequence_ode_general():
    s = s_sequence(catalog.claimed_poincare("ode-general"), 6)
    assert s[5] == 3 and s[6] == 14


def test_s_sequence_zero():
    assert s_sequence(RF.zero(), 5) == [0, 0, 0, 0, 0, 0]


def test_s_sequence_riemannian_2d():
    assert s_sequence(catalog.claimed_poincare("riemannian", n=2), 4) == [0, 0, 1, 2, 5]


def test_s_sequence_differences_recover_h():
    p = catalog.claimed_poincare("conformal", n=4)
    s = s_sequence(p, 30)
    series = p.series(30)
    for k in range(1, 31):
        assert s[k] - s[k - 1] == series[k]


def test_asymptotic_check_examples():
    assert asymptotic_check(catalog.claimed_poincare("kaehler", n=2))
    assert analyze(catalog.claimed_poincare("kaehler", n=2)).d == 4
    assert asymptotic_check(RF(1, ONE_MINUS_Z))
    with pytest.raises(NotPRForm):
        asymptotic_check(catalog.claimed_poincare("hamiltonian-critical", n=1))


def test_pole_order_multiplicative():
    f = catalog.claimed_poincare("riemannian", n=3)
    g = catalog.claimed_poincare("ode-cubic")
    assert analyze(f * g).d == analyze(f).d + analyze(g).d


def test_pole_report_invariants_catalog_wide():
    for entry in catalog.list_entries():
        for sample in entry.samples(6):
            report = analyze(entry.claimed_p(**sample))
            assert report.d >= 0
            if report.d > 0:
                assert report.sigma != 0
            if report.conforms_to_pr:
                assert report.other_unit_poles == ()
            if entry.id not in ("hamiltonian-critical", "poincare-dulac"):
                assert report.conforms_to_pr, (entry.id, sample)
