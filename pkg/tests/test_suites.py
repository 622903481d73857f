import pytest

from holonomy.exceptions import DomainMismatchError
from holonomy.generators import elliptic_EK, f2_oracle, lambda_correlation
from holonomy.generators.schemas import Branch
from holonomy.operators import DiffOp, compose, lclm
from holonomy.rings.fields import QQ
from holonomy.rings.series import Series
from holonomy.suites import (
    CellStatus,
    SuiteCell,
    SuiteReport,
    direct_sum_report,
    fit_EK,
    kw_covariance_check,
    pvi_residual,
    russian_doll_report,
    theta_ratio_check,
)
from holonomy.suites.beukers import beukers_case, beukers_operator
from holonomy.suites.pvi import kw_spot_check, lambda_residuals
from holonomy.suites.service import run_suite
from holonomy.suites.structure import doll_direct_sum, intertwiner_report

D = DiffOp.D()


# -- sigma form ---------------------------------------------------------------------
def test_pvi_residual_of_prefactor_vanishes():
    C = lambda_correlation(Branch.BELOW, 0, QQ(0), 20)
    result = pvi_residual(C, 0, Branch.BELOW)
    assert result.vanishes
    assert result.first_nonzero() is None


@pytest.mark.parametrize("branch,N", [("below", 0), ("below", 1), ("above", 0), ("above", 1)])
def test_pvi_residual_of_lambda_correlation(branch, N):
    C = lambda_correlation(Branch(branch), N, QQ(1, 2), 16)
    assert pvi_residual(C, N, branch).vanishes


def test_pvi_residual_detects_foreign_series():
    C = Series.from_polynomial([1, 1], 12)
    result = pvi_residual(C, 0, "below")
    assert not result.vanishes
    assert result.first_nonzero() is not None


def test_sigma_rejects_wrong_branch():
    with pytest.raises(DomainMismatchError):
        pvi_residual(Series.from_polynomial([1, 1], 12), 1, "above")


def test_lambda_residuals_vanish_order_by_order():
    count, ok = lambda_residuals(Branch.BELOW, 0, 12)
    assert count >= 1
    assert ok


def test_kramers_wannier_covariance():
    assert kw_covariance_check()
    assert kw_covariance_check(0)
    original, transformed = kw_spot_check()
    assert original == transformed


# -- E, K expressions --------------------------------------------------------------------
def test_fit_EK_two_particle_zero():
    target = f2_oracle(0, 30)
    expr = fit_EK(target)
    assert expr.denominator == 2
    assert expr.t_power == 0
    E, K = elliptic_EK(30)
    assert (expr.evaluate(E, K) - target).is_zero()
    assert "K" in expr.to_text()


def test_fit_EK_rejects_ramified_target():
    with pytest.raises(DomainMismatchError):
        fit_EK(lambda_correlation(Branch.ABOVE, 1, QQ(0), 10))


# -- operator structure ---------------------------------------------------------------------
def test_direct_sum_of_coprime_summands():
    minus_one = DiffOp.from_strings(["-1", "1"])
    report = direct_sum_report(lclm(D, minus_one), [D, minus_one])
    assert report.passed
    assert report.suite == "direct-sum"


def test_direct_sum_rejects_repeated_summand():
    report = direct_sum_report(compose(D, D), [D, D])
    assert not report.passed
    checks = {c.params["check"] for c in report.failures()}
    assert "gcrd" in checks
    assert "lclm" in checks


def test_printed_intertwiners():
    assert intertwiner_report().passed


@pytest.mark.slow
def test_russian_doll():
    assert russian_doll_report(Ns=(0, 1), order=40).passed


@pytest.mark.slow
def test_doll_direct_sum():
    assert doll_direct_sum(0).passed


# -- numeric checks ------------------------------------------------------------------------------
def test_theta_rejects_bad_inputs():
    with pytest.raises(ValueError):
        theta_ratio_check(lam="2")
    with pytest.raises(ValueError):
        theta_ratio_check(t="3/2")


@pytest.mark.slow
@pytest.mark.parametrize("lam", ["1", "-1"])
def test_theta_ratio(lam):
    check = theta_ratio_check(lam=lam)
    assert check.deviation < 1e-8
    assert check.convention in check.candidates


def test_beukers_operator_range():
    assert beukers_operator(2).order == 4
    with pytest.raises(ValueError):
        beukers_operator(7)


@pytest.mark.slow
def test_beukers_factorization():
    case = beukers_case(1, samples=(2.0,))
    assert case.complete
    assert case.composes
    assert len(case.factors) == 4
    assert case.annihilation < 1e-6


# -- reports and dispatch ----------------------------------------------------------------------
def test_suite_report_frame():
    report = SuiteReport(suite="demo", cells=[
        SuiteCell.of(True, {"N": 0}, first_nonzero=None),
        SuiteCell.of(False, {"N": 1}, witnesses=[1, 2]),
    ])
    assert not report.passed
    assert [c.status for c in report.cells] == [CellStatus.PASS, CellStatus.FAIL]
    frame = report.to_frame()
    assert list(frame["status"]) == ["pass", "fail"]
    assert "witness.witnesses" not in frame.columns
    assert "tolerance" not in report.to_report()


def test_run_suite_unknown_name():
    with pytest.raises(ValueError, match="Unsupported suite"):
        run_suite("nope")


def test_run_suite_kw():
    report = run_suite("kw")
    assert report.suite == "kw"
    assert report.passed
