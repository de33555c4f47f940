import pytest

from poincount import catalog
from poincount.algebra import UnsupportedArgument, binomial
from poincount.counting import (
    CountingPlan,
    InconsistentPlan,
    SHIPPED_PLANS,
    UnknownSymbol,
    assemble_hilbert,
    dim_delta,
    dim_diff_group,
    dim_sym,
    euler_symbol_dim,
    shipped_plan,
    symbol_dim_profile,
)

from oracles import count_monomials


def test_dim_sym_examples():
    assert dim_sym(3, 2) == 6
    assert dim_sym(2, 5) == count_monomials(2, 5) == 6
    for n in range(1, 7):
        assert dim_sym(n, 0) == 1
    assert dim_sym(4, -1) == 0  # binomial convention


def test_dim_sym_enumeration_oracle():
    for n in range(1, 5):
        for k in range(0, 7):
            assert dim_sym(n, k) == count_monomials(n, k)


def test_dim_diff_group_examples():
    assert dim_diff_group(2, 1) == 6
    assert dim_diff_group(4, 2) == 60
    assert dim_diff_group(1, 1) == 2
    with pytest.raises(UnsupportedArgument):
        dim_diff_group(2, 0)


def test_dim_delta_examples():
    assert dim_delta(2, 3) == 8
    assert dim_delta(3, 1) == 9
    for n in range(1, 8):
        assert dim_delta(n, 0) == n


def test_delta_is_diff_group_fiber():
    for n in range(1, 7):
        for k in range(2, 9):
            assert dim_delta(n, k) == dim_diff_group(n, k) - dim_diff_group(n, k - 1)


def test_euler_symbol_dim():
    # trace-free 2nd-order equation symbol at n = 4, k = 3
    assert euler_symbol_dim([binomial(6, 3) * 10, binomial(4, 1) * 10, 4]) == 164
    assert euler_symbol_dim([5]) == 5
    assert euler_symbol_dim([3, 3]) == 0
    with pytest.raises(UnsupportedArgument):
        euler_symbol_dim([])


def test_symbol_dim_profiles():
    assert symbol_dim_profile("orthogonal", 3, 2) == 0
    assert [symbol_dim_profile("orthogonal", 4, k) for k in range(4)] == [4, 6, 0, 0]
    for n in range(2, 11):
        for k in range(2, 8):
            assert symbol_dim_profile("orthogonal", n, k) == 0
    assert symbol_dim_profile("complex-gl", 2, 1) == 12
    assert symbol_dim_profile("acs2-tilde", 2, 3) == 2
    assert [symbol_dim_profile("acs2-tilde", 2, k) for k in range(5)] == [0, 4, 2, 2, 2]
    assert [symbol_dim_profile("projective-chain", 3, k) for k in range(5)] == [
        3,
        9,
        3,
        0,
        0,
    ]
    assert [symbol_dim_profile("conformal-orth", 4, k) for k in range(5)] == [
        4,
        7,
        4,
        0,
        0,
    ]
    with pytest.raises(UnknownSymbol):
        symbol_dim_profile("nonsense", 3, 0)
    with pytest.raises(UnsupportedArgument):
        symbol_dim_profile("acs2-tilde", 3, 1)


def test_assemble_rejects_negative_rows():
    plan = CountingPlan(base_dim=2, order=1, symbol_dim=lambda k: 0)
    with pytest.raises(InconsistentPlan):
        assemble_hilbert(plan, 6)


def test_linear_connections_override_values():
    # the order-0 override is the mechanistic n^3 - n^2 - n*C(n+1,2)
    assert shipped_plan("linear-connections", 3).row(0) == 0
    assert shipped_plan("linear-connections", 4).row(0) == 8


def test_fedosov_small_dimension_values():
    spec = assemble_hilbert(shipped_plan("fedosov", 1))
    assert spec.h(2) == 5
    for k in range(3, 20):
        assert spec.h(k) == 3 * k


def test_einstein_lorentzian_values():
    spec = assemble_hilbert(shipped_plan("einstein", 4))
    assert [spec.h(k) for k in (2, 3, 4)] == [5, 24, 42]


@pytest.mark.parametrize("structure_id", sorted(SHIPPED_PLANS))
def test_plans_rederive_catalog(structure_id):
    builder, valid_range = SHIPPED_PLANS[structure_id]
    for n in valid_range:
        derived = assemble_hilbert(builder(n), 48)
        target = catalog.hilbert_spec(structure_id, n=n)
        assert derived.values(40) == target.values(40), (structure_id, n)


def test_finite_type_stabilizers_vanish_eventually():
    for structure_id, (builder, valid_range) in SHIPPED_PLANS.items():
        if structure_id == "almost-complex":
            continue
        for n in valid_range:
            plan = builder(n)
            tail = [plan.stabilizer_dim(k) for k in range(3, 30)]
            assert all(v == 0 for v in tail), (structure_id, n)
            head = [plan.stabilizer_dim(k) for k in range(0, 3)]
            assert all(a >= b for a, b in zip(head, head[1:] + tail[:1]))


def test_almost_complex_stabilizer_growth_stabilizes():
    # infinite-type: stabilizer dims grow, with eventually constant increments
    # matching the complex prolongation profile
    for n in range(2, 6):
        plan = shipped_plan("almost-complex", n)
        dims = [plan.stabilizer_dim(k) for k in range(0, 25)]
        assert all(b > a for a, b in zip(dims, dims[1:]))
        for k in range(4, 24):
            expected = symbol_dim_profile("complex-gl", n, k + 1) - symbol_dim_profile(
                "complex-gl", n, k
            )
            assert dims[k + 1] - dims[k] == expected


def test_shipped_plan_unknown_id():
    with pytest.raises(UnknownSymbol):
        shipped_plan("riemannian", 3)


def test_einstein_weyl_closed_form_matches_mechanistic_row():
    # catalog h_2 closed form vs the plan's generic row, through n = 12
    for n in range(4, 13):
        plan = shipped_plan("einstein-weyl", n)
        closed = catalog.hilbert_spec("einstein-weyl", n=n).h(2)
        assert plan.row(2) == closed
    # and the delta-corrected n = 3 override
    assert shipped_plan("einstein-weyl", 3).row(2) == catalog.hilbert_spec(
        "einstein-weyl", n=3
    ).h(2)
