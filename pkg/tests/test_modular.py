import mpmath
import pytest

from holonomy.exceptions import DomainMismatchError
from holonomy.modular import (
    Direction,
    RootClass,
    SingularityCatalog,
    VariableFrame,
    classify,
    extra_singularities,
    heegner_check,
    j_of_k,
    j_values_of_k_polynomial,
    kw_image,
    landen,
    landen_fixed_points,
    load_catalog,
    modular_curve_residual,
    nickelian,
    nickelian_order,
    nome_tau,
    tau_equivalent,
)
from holonomy.operators import DiffOp
from holonomy.rings.fields import QQ


# -- j-invariant --------------------------------------------------------------------
def test_j_of_k_exact_values():
    assert j_of_k("1/2") == QQ(35152, 9)
    assert j_of_k(2) == j_of_k("1/2")


def test_j_of_k_square_lattice():
    assert abs(j_of_k(mpmath.sqrt(mpmath.mpf(1) / 2)) - 1728) < 1e-15


def test_j_of_k_poles():
    for k in (0, 1, -1):
        with pytest.raises(DomainMismatchError):
            j_of_k(k)


def test_j_values_of_landen_fixed_factor():
    assert j_values_of_k_polynomial([4, 3, 1]) == [-3375]


def test_kw_image_reverses():
    assert kw_image([4, 3, 1, 0]) == [1, 3, 4]


# -- Landen transformations -----------------------------------------------------------
@pytest.mark.parametrize("direction", Direction.list())
def test_landen_fixes_endpoints(direction):
    assert landen(0, direction) == 0
    assert abs(landen(1, direction) - 1) < 1e-25


def test_landen_ascending_value():
    assert abs(landen(mpmath.mpf(1) / 2, Direction.ASCENDING) - 0.9428090415820634) < 1e-14


@pytest.mark.parametrize("k", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_landen_directions_are_inverse(k):
    up = landen(k, "ascending")
    assert abs(landen(up, "descending") - k) < 1e-20


def test_landen_descending_branch_cut():
    with pytest.raises(DomainMismatchError):
        landen(2, "descending")


def test_landen_fixed_points_ascending():
    assert landen_fixed_points("ascending") == [([0, 1], 1), ([1, -1], 1), ([4, 3, 1], 1)]


# -- nome and modular curve -------------------------------------------------------------
def test_nome_of_square_lattice():
    with mpmath.workdps(30):
        result = nome_tau(mpmath.sqrt(mpmath.mpf(1) / 2))
        assert abs(result.tau - 1j) < 1e-20
        assert abs(result.K - result.Kp) < 1e-20
    assert tau_equivalent(result.canonical, 1j)


def test_nome_rejects_real_modulus_beyond_one():
    with pytest.raises(DomainMismatchError):
        nome_tau(2)


def test_modular_curve_residual_zeros():
    assert modular_curve_residual(1728, 287496) == 0
    assert modular_curve_residual(-3375, -3375) == 0


def test_modular_curve_residual_symmetric():
    assert modular_curve_residual(5, 11) == modular_curve_residual(11, 5)
    assert modular_curve_residual(5, 11) != 0


@pytest.mark.parametrize("n,j", [(1, 0), (2, -3375)])
def test_heegner_values(n, j):
    check = heegner_check(n)
    assert check.nearest == j
    assert check.deviation < 1e-6


def test_variable_frame_roots_are_dual():
    with mpmath.workdps(30):
        a, b = VariableFrame.s_of_w(mpmath.mpf(1) / 5)
        assert abs(a * b - 1) < 1e-25
        assert abs(VariableFrame.w_of_s(a) - mpmath.mpf(1) / 5) < 1e-25
    assert VariableFrame.on_unit_circle(mpmath.mpf(1) / 2)


# -- Nickelian sets and classification --------------------------------------------------
def test_nickelian_order_one():
    result = nickelian(1)
    assert result.roots == [-0.5, 0.25, 1.0]
    assert max(result.witnesses) < 1e-12


def test_nickelian_exact_factors():
    result = nickelian(1)
    assert sorted(result.factors) == [[-1, 1], [-1, 4], [1, 2]]


@pytest.mark.parametrize("m", [4, 5, 6])
def test_nickelian_higher_orders(m):
    result = nickelian(m)
    assert len(result.roots) == len(result.polynomial) - 1
    assert sum(len(f) - 1 for f in result.factors) == len(result.roots)
    assert max(result.witnesses) < 1e-12
    assert [-1, 4] in result.factors


def test_extra_singularities_of_phiH5():
    extra = extra_singularities("phiH5", "phiD5", 5)
    assert sorted(tuple(item.factor) for item in extra) == sorted(
        [("1", "3", "4"), ("1", "4", "8"), ("1", "-7", "5", "-4")]
    )
    cm = next(item for item in extra if item.factor == ["1", "3", "4"])
    assert cm.root_class == RootClass.CM
    assert cm.j == -3375


def test_nickelian_rejects_order_zero():
    with pytest.raises(ValueError):
        nickelian(0)


def test_nickelian_order_lookup():
    assert nickelian_order([1, -4], 3) == 1
    assert nickelian_order([1, -4], 0) is None
    assert nickelian_order([1], 3) is None


def test_classify_cm_factor():
    [item] = classify([[1, 3, 4]], 3)
    assert item.root_class == RootClass.CM
    assert item.j == -3375


def test_classify_nickelian_factor():
    [item] = classify([[1, -4]], 3)
    assert item.root_class == RootClass.NICKELIAN
    assert item.nickelian_order == 1


def test_classify_apparent_factor():
    operator = DiffOp.from_strings(["-1", "w"], "w")
    [item] = classify([[0, 1]], 3, operator=operator)
    assert item.root_class == RootClass.APPARENT


def test_classify_unknown_with_empty_catalog():
    [item] = classify([[7, 0, 0, 1]], 1, catalog=SingularityCatalog(entries=[]))
    assert item.root_class == RootClass.UNKNOWN


def test_catalog_lookup_and_variables():
    catalog = load_catalog()
    assert catalog.lookup([-1, 4]).name == "1-4w"
    assert any(name == "k^2+3k+4" for name, _ in catalog.polynomials("k"))
    assert all(e.variable == "w" for e in catalog.tagged("phiH3", "w"))
