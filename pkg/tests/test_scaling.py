import mpmath
import pytest

from holonomy.exceptions import DomainMismatchError
from holonomy.operators import DiffOp, compose, right_divrem, sym_power, verify_intertwiner
from holonomy.rings.fields import QQ
from holonomy.scaling import bessel_bridge, f2_scaled_fit, scale_limit, scaled_family, scaled_structure_report
from holonomy.scaling.bridge import f1_lattice, flatness, h
from holonomy.scaling.limit import f2_scaled_operator, scaled_factor
from holonomy.suites import data


@pytest.mark.parametrize("j", [1, 2, 3])
def test_scale_limit_of_lattice_operators(j):
    limit = scale_limit(data.lattice_family()[j])
    assert limit.variable == "x"
    assert limit.normalized() == data.scaled(j).normalized()


def test_scale_limit_is_not_multiplicative_at_four():
    alone = scale_limit(data.L4())
    assert alone.normalized() != data.scaled(4).normalized()
    product = scale_limit(compose(data.L4(), data.L2()))
    assert product.normalized() == compose(data.scaled(4), data.scaled(2)).normalized()
    split = right_divrem(product, data.scaled(2))
    assert split.remainder.is_zero()
    assert split.quotient.normalized() == data.scaled(4).normalized()


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_scaled_factor_matches_table(j):
    assert scaled_factor(j).normalized() == data.scaled(j).normalized()


def test_scale_limit_of_product():
    limit = scale_limit(compose(data.L3(), data.L1()))
    assert limit.normalized() == compose(data.scaled(3), data.scaled(1)).normalized()


def test_scale_limit_needs_parameter():
    with pytest.raises(DomainMismatchError):
        scale_limit(data.L_K())


def test_two_particle_limit_is_bessel():
    assert data.scaled(2).normalized() == data.bessel().normalized()


def test_printed_scaled_witness():
    U, V = data.scaled_witness()
    sym2 = sym_power(data.bessel(), 2)
    assert verify_intertwiner(data.scaled(3), sym2.monic(), U, V)


def test_scaled_family_shape():
    family = scaled_family()
    assert sorted(family.lattice) == [1, 2, 3, 4]
    assert sorted(family.scaled) == [1, 2, 3, 4, 5]
    assert f2_scaled_operator().order == 4


def test_unknown_scaled_index():
    with pytest.raises(KeyError):
        data.scaled(6)


@pytest.mark.slow
def test_scaled_structure_report():
    assert scaled_structure_report().passed


# -- numeric bridge ---------------------------------------------------------------------
def test_h_is_modified_bessel():
    for x in (0.5, 1.0, 2.0):
        assert abs(h(x) - mpmath.besselk(0, x) / mpmath.pi) < 1e-12


def test_h_at_exact_rational():
    assert abs(h(QQ(1, 2)) - mpmath.besselk(0, 0.5) / mpmath.pi) < 1e-12


def test_h_rejects_nonpositive():
    with pytest.raises(ValueError):
        h(0)


def test_f1_lattice_at_zero_distance():
    with mpmath.workdps(30):
        assert abs(f1_lattice(0, 0.3) - 2 * mpmath.ellipk(0.3) / mpmath.pi) < 1e-20


def test_flatness():
    assert flatness([2, 2, 2]) == 0.0
    assert flatness([1, 3]) == 1.0


@pytest.mark.slow
def test_bessel_bridge():
    report = bessel_bridge()
    assert report.positive_decreasing
    assert report.ode_residual < 1e-6
    assert report.scale is not None
    assert report.flatness[report.scale] < 1e-3


def test_f2_scaled_fit_needs_samples():
    with pytest.raises(ValueError):
        f2_scaled_fit(())


@pytest.mark.slow
def test_f2_scaled_fit():
    fit = f2_scaled_fit()
    assert len(fit.samples) == 7
    assert "1" in fit.coefficients
    assert fit.relative_residual < 1e-3
