import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy.exceptions import DomainMismatchError
from holonomy.generators import elliptic_EK
from holonomy.operators import (
    INFINITY, DiffOp, ParamDiffOp, annihilates, apply, check_apparent, compose, factor_first_order_chain,
    frobenius, gcrd, image_operator, indicial, is_apparent, lclm, load_operator, rational_solutions,
    right_divrem, save_operator, search_intertwiner, singular_points, sym_power, verify_intertwiner,
)
from holonomy.rings.fields import QQ
from holonomy.rings.series import Series
from holonomy.suites import data


def op(*coefficients, variable="t"):
    return DiffOp.from_strings(list(coefficients), variable)


D = DiffOp.D()

poly_lists = st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=3)


# -- ring operations ----------------------------------------------------------------
def test_compose_constant_coefficients():
    assert compose(D, D) == op("0", "0", "1")


def test_compose_leibniz():
    assert compose(D, op("t")) == op("1", "t")


def test_compose_orders_add():
    L, M = op("t", "1", "t**2"), op("1", "t-1")
    assert compose(L, M).order == 3


def test_right_divrem_by_construction():
    A, B = op("t", "1"), op("1", "t**2")
    q, r = right_divrem(compose(A, B), B)
    assert q == A and r.is_zero()


def test_right_divrem_small_cases():
    assert right_divrem(op("0", "0", "1"), D) == (D, op())
    q, r = right_divrem(op("1", "0", "1"), D)
    assert q == D and r == op("1")


def test_right_divrem_by_zero():
    with pytest.raises(DomainMismatchError):
        right_divrem(D, op())


@settings(max_examples=25, deadline=None)
@given(st.lists(poly_lists, min_size=1, max_size=4), st.lists(poly_lists, min_size=2, max_size=3))
def test_right_divrem_identity(left, right):
    L = DiffOp.from_dense(left)
    M = DiffOp.from_dense(right)
    if M.order < 1:
        return
    q, r = right_divrem(L, M)
    assert r.order < M.order
    assert compose(q, M) + r == L


def test_gcrd_by_hand():
    L = compose(D, op("-1", "1"))
    M = compose(op("1", "1"), op("-1", "1"))
    assert gcrd(L, M) == op("-1", "1")


def test_gcrd_idempotent():
    L = data.L_K()
    assert gcrd(L, L) == L.normalized()


def test_lclm_of_one_and_exponential():
    assert lclm(D, op("-1", "1")) == op("0", "-1", "1")


def test_lclm_right_divisible():
    L, M = data.L_K(), op("-1", "t")
    multiple = lclm(L, M)
    assert multiple.order == 3
    assert right_divrem(multiple, L).remainder.is_zero()
    assert right_divrem(multiple, M).remainder.is_zero()


def test_field_mismatch():
    with pytest.raises(DomainMismatchError):
        compose(D, DiffOp.D("x"))


def test_parametric_coefficient_must_be_even():
    with pytest.raises(DomainMismatchError):
        ParamDiffOp.from_strings(["N", "1"])


def test_specialize():
    assert data.L2().specialize(0) == op("-1/(4*t) + 1/(4*(t-1))", "(2*t-1)/((t-1)*t)", "1")


# -- application ------------------------------------------------------------------------
def test_apply_fit_contract():
    L = op("-4", "1-4*w", variable="w")
    assert annihilates(L, Series.geometric(4, 30, "w"))


def test_apply_K_operator():
    K = elliptic_EK(40)[1]
    image = apply(data.L_K(), K)
    assert image.is_zero()


def test_apply_derivative_to_constant():
    assert apply(D, Series.constant(3, 5)).is_zero()


def test_apply_rejects_other_variable():
    with pytest.raises(DomainMismatchError):
        apply(D, Series.constant(1, 5, "w"))


def test_apply_to_ramified_series():
    # 2t D - 1 kills t^(1/2)
    s = Series([0, 1, 0, 0, 0], ramification=2)
    assert annihilates(op("-1", "2*t"), s)


# -- symmetric powers and images ---------------------------------------------------------
def test_sym_power_one():
    L = data.L_K()
    assert sym_power(L, 1) == L.normalized()


def test_sym_power_order():
    assert sym_power(data.L_K(), 3).order == 4


def test_sym_square_of_L2_matches_printed():
    assert sym_power(data.L2(), 2) == data.sym2_L2().normalized()


def test_sym_square_of_bessel_kills_products():
    B = data.bessel()
    basis = frobenius(B, 0, 30)
    y = basis.solutions["0"]
    assert annihilates(sym_power(B, 2), y * y)


def test_sym_power_rejects_zero_power():
    with pytest.raises(DomainMismatchError):
        sym_power(D, 0)


def test_image_operator_identity():
    L = data.L_K()
    assert image_operator(L, op("1")) == L.normalized()


def test_image_operator_of_derivative():
    # derivatives of 1 and t span the constants
    assert image_operator(op("0", "0", "1"), D) == D


# -- local analysis ------------------------------------------------------------------------
def test_singular_points_apery():
    report = singular_points(data.apery(), catalog=[])
    found = {tuple(f.polynomial): f.multiplicity for f in report.factors}
    assert found == {("0", "1"): 2, ("1", "-34", "1"): 1}


def test_singular_points_of_D():
    assert singular_points(D, catalog=[]).factors == []


def test_indicial_K_at_origin():
    data_K = indicial(data.L_K(), 0)
    assert data_K.exponents == [0, 0]
    assert data_K.regular


def test_indicial_simple_apparent():
    L = op("-1", "t")
    assert indicial(L, 0).exponents == [QQ(1)]
    assert is_apparent(L, 0)
    solution = frobenius(L, 0, 4).solutions["1"]
    assert solution.leading_exponent() == 1
    assert solution.valuation() == 0 and not any(solution.coefficients[1:])


def test_bessel_irregular_at_infinity():
    assert not indicial(data.bessel(), INFINITY).regular
    assert not check_apparent(data.bessel(), INFINITY).apparent


def test_K_origin_not_apparent():
    check = check_apparent(data.L_K(), 0)
    assert not check.apparent
    assert "repeated" in check.reason


def test_frobenius_counts_slots():
    basis = frobenius(data.L_K(), 0, 10)
    assert len(basis.solutions) + len(basis.obstructed) + basis.unresolved == 2
    assert basis.solutions["0"].agree(elliptic_EK(10)[1])


# -- intertwiners -----------------------------------------------------------------------------
def test_identity_intertwiner():
    L = data.L_K()
    assert verify_intertwiner(L, L, 1, 1)
    found = search_intertwiner(L, L, 1, 1)
    assert found is not None and found.U.order == 0


def test_intertwiner_order_obstruction():
    assert search_intertwiner(D, op("0", "0", "1"), 0, 0) is None


def test_printed_lattice_intertwiners():
    sym2 = sym_power(data.L2(), 2).monic()
    assert verify_intertwiner(data.L3(), sym2, data.U3(), data.V3())


# -- rational solutions ---------------------------------------------------------------------------
def test_rational_solutions_of_D2():
    L = op("0", "0", "1")
    sols = rational_solutions(L)
    t = L.gen
    assert len(sols) == 2
    assert set(map(str, sols)) == {str(L.field(1)), str(L.field(t))}


def test_rational_solution_constructed():
    L = op("-(2/t - 1/(t-1))", "1")
    sols = rational_solutions(L)
    t = L.gen
    a = t ** 2 / (t - 1)
    assert len(sols) == 1
    ratio = sols[0] / a
    assert ratio.diff(t) == 0


def test_peel_D2():
    chain = factor_first_order_chain(op("0", "0", "1"))
    assert chain.complete
    assert [f.order for f in chain.factors] == [1, 1]
    assert compose(chain.factors[0], chain.factors[1]).normalized() == op("0", "0", "1")


# -- files -----------------------------------------------------------------------------------------------
def test_operator_file(tmp_path):
    L = data.apery()
    path = save_operator(L, tmp_path / "apery.json")
    assert load_operator(path) == L.primitive()


def test_zero_operator_dict():
    assert op().to_dict()["order"] == -1
