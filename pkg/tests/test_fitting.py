import pandas as pd
import pytest

from holonomy.exceptions import DomainMismatchError, NoSolutionError, TruncationError
from holonomy.fitting import (
    Ansatz,
    CellStatus,
    FitMethod,
    ScanCell,
    degree_scan,
    fit,
    float_scan,
    lift_fit,
    minimal_operator,
    multi_prime_fit,
    scan_to_csv,
    stabilized_roots,
    terms_required,
    white_noise,
)
from holonomy.generators import elliptic_EK, f1, phiH
from holonomy.modular import list_polynomial
from holonomy.operators import DiffOp, annihilates, compose
from holonomy.rings.fields import REFERENCE_PRIMES
from holonomy.rings.poly import poly_coeffs, poly_from_coeffs, poly_ring
from holonomy.rings.series import Series
from holonomy.suites import data

D = DiffOp.D()


def geometric_operator(variable):
    # (1 - 4w) D - 4 kills sum 4^k w^k
    return DiffOp.from_strings(["-4", f"1-4*{variable}"], variable)


def test_terms_required_counts_unknowns_and_margin():
    assert terms_required(Ansatz.dense(1, 1)) == 14
    a = Ansatz.dense(5, 40)
    assert a.unknown_count == 246
    assert terms_required(a) == 256


def test_ansatz_rejects_wrong_degree_count():
    with pytest.raises(ValueError):
        Ansatz(order=2, degrees=[1, 1])


def test_fit_geometric_series():
    s = phiH(1, 20)
    result = fit(s, Ansatz.dense(1, 1))
    assert result.method == FitMethod.EXACT
    assert result.unknowns == 4
    assert len(result.operators) == 1
    assert result.operators[0].normalized() == geometric_operator(s.variable).normalized()


def test_fit_recovers_elliptic_operator():
    _, K = elliptic_EK(30)
    result = fit(K, Ansatz.dense(2, 2))
    assert len(result.operators) == 1
    assert result.operators[0].normalized() == data.L_K().normalized()
    assert result.margin >= 10


def test_fit_modulo_prime(prime):
    s = phiH(1, 20, prime)
    result = fit(s, Ansatz.dense(1, 1))
    assert result.method == FitMethod.MODULAR
    assert result.prime == prime
    assert all(annihilates(op, s) for op in result.operators)


def test_fit_report_shape():
    report = fit(phiH(1, 20), Ansatz.dense(1, 1)).to_report()
    assert report["method"] == "exact"
    assert report["prime"] is None
    assert len(report["operators"]) == 1


def test_fit_needs_enough_terms():
    with pytest.raises(TruncationError):
        fit(phiH(1, 5), Ansatz.dense(1, 1))


def test_fit_without_solution():
    with pytest.raises(NoSolutionError):
        fit(white_noise(30), Ansatz.dense(1, 1))


def test_fit_rejects_ramified_series():
    with pytest.raises(DomainMismatchError):
        fit(f1(1, 20), Ansatz.dense(1, 1))


def test_fit_rejects_variable_mismatch():
    with pytest.raises(DomainMismatchError):
        fit(phiH(1, 20), Ansatz.dense(1, 1, variable="zz"))


def test_large_rational_systems_are_lifted():
    _, K = elliptic_EK(30)
    result = fit(K, Ansatz.dense(2, 2), exact_limit=0)
    assert result.method == FitMethod.LIFTED
    assert len(result.primes_used) >= 2
    assert result.operators[0].normalized() == data.L_K().normalized()


def test_minimal_operator_is_right_gcd():
    minus_one = DiffOp.from_strings(["-1", "1"])
    plus_one = DiffOp.from_strings(["1", "1"])
    candidates = [compose(D, minus_one), compose(plus_one, minus_one)]
    assert minimal_operator(candidates).normalized() == minus_one.normalized()


def test_minimal_operator_single_and_empty():
    assert minimal_operator([D]) == D
    with pytest.raises(NoSolutionError):
        minimal_operator([])


def test_lift_fit_with_exact_check():
    _, K = elliptic_EK(30)
    result = lift_fit(lambda p: K.reduce(p), Ansatz.dense(2, 2), REFERENCE_PRIMES, exact=K)
    assert result.method == FitMethod.LIFTED
    assert result.prime is None
    assert result.operators[0].normalized() == data.L_K().normalized()


def test_lift_fit_checks_on_a_further_prime():
    operator = multi_prime_fit(lambda p: phiH(1, 24, p), Ansatz.dense(1, 1), REFERENCE_PRIMES)
    assert operator.normalized() == geometric_operator(operator.variable).normalized()


def test_lift_fit_needs_two_primes():
    with pytest.raises(DomainMismatchError):
        lift_fit(lambda p: phiH(1, 20, p), Ansatz.dense(1, 1), [REFERENCE_PRIMES[0]])


def test_degree_scan_stops_at_first_solution():
    s = phiH(1, 30)
    result = degree_scan(s, [1, 2], 3)
    assert result.unknowns == 4
    assert result.operators[0].normalized() == geometric_operator(s.variable).normalized()


def test_degree_scan_without_solution():
    with pytest.raises(NoSolutionError):
        degree_scan(white_noise(20), [1], 2)


# -- floating point scan -------------------------------------------------------------
def test_float_scan_finds_geometric_singularity():
    s = Series([4 ** k for k in range(40)], "w")
    report = float_scan(s, [1], [1, 2, 3, 4])
    assert len(report.cells) == 4
    assert any(abs(r.value - 0.25) < 1e-6 for r in report.roots)


def test_float_scan_marks_underdetermined_cells():
    s = Series([4 ** k for k in range(12)], "w")
    report = float_scan(s, [2], [1, 5])
    assert report.cells[-1].status == CellStatus.UNDERDETERMINED


def test_float_scan_white_noise_has_no_stable_roots():
    report = float_scan(white_noise(60, seed=7), [1, 2], [1, 2, 3, 4, 5])
    assert report.roots == []


def test_float_scan_rejects_empty_grid():
    with pytest.raises(ValueError):
        float_scan(phiH(1, 10), [], [1])


def test_stabilized_roots_need_consecutive_cells():
    cell = ScanCell(order=1, degree=1, status=CellStatus.OK, roots=[(0.25, 0.0)])
    found = stabilized_roots([cell, cell, cell])
    assert len(found) == 1
    assert found[0].cells == 3
    assert found[0].value == 0.25
    assert stabilized_roots([cell, cell]) == []


def test_stabilized_roots_skip_degenerate_cells():
    ok = ScanCell(order=1, degree=1, status=CellStatus.OK, roots=[(0.5, 0.0)])
    bad = ScanCell(order=1, degree=2, status=CellStatus.DEGENERATE)
    assert len(stabilized_roots([ok, bad, ok, bad, ok])) == 1


def test_scan_to_csv(tmp_path):
    s = Series([4 ** k for k in range(40)], "w")
    report = float_scan(s, [1], [1, 2, 3])
    path = tmp_path / "roots.csv"
    scan_to_csv(report, str(path))
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["real", "imag", "digits", "cells"]
    assert len(frame) == len(report.roots)


@pytest.mark.slow
def test_float_scan_recovers_phiH3_singularities():
    report = float_scan(phiH(3, 204), [5], range(28, 32), dps=60)
    pair = 7 ** 0.5 / 8
    for target in (0.25, -0.5, 1.0, complex(-0.375, pair), complex(-0.375, -pair)):
        assert any(abs(r.value - target) < 1e-5 and r.digits >= 4 for r in report.roots), target


def test_float_scan_solves_underdetermined_cells():
    s = Series([4 ** k for k in range(12)], "w")
    cell = float_scan(s, [2], [5]).cells[0]
    assert cell.status == CellStatus.UNDERDETERMINED
    assert cell.residual is not None and cell.residual < 1e-20
    assert cell.roots


# -- structured ansatz and the printed operators ---------------------------------------------
PHI3_HEAD = [([0, 1], 3), ([1, -4], 4), ([1, 4], 2), ([1, -1], 1), ([1, 2], 1), ([1, 3, 4], 1)]
PHI3_APPARENT = [
    -5, 21, 428, 5364, -82416, -299504, 714944, 3127872, -8220672, -25858048, -7077888,
    31424512, -42467328, -31457280, -4194304, 4194304,
]
PHI4_APPARENT = [128, 2233, -2847, 3143, -3601, 144, -64]


def same_up_to_scalar(head, expected):
    return head * expected.LC == expected * head.LC


def test_alpha_pattern_exponents():
    a = Ansatz.alpha_pattern(3, [[0, 1]], [1, 1], 2)
    assert a.prefactors[0].exponents == [0, 1, 1, 1]
    assert a.prefactors[1].exponents == [0, 1, 2, 2]
    assert a.z0 == [1, 1]
    assert a.prefactor(3) == [0, 1, 2, 1]
    assert a.unknown_count == 12


def test_alpha_pattern_fit():
    a = Ansatz.alpha_pattern(1, [[1, -4]], [1], 1)
    result = fit(phiH(1, 30), a)
    assert minimal_operator(result.operators).normalized() == geometric_operator("w").normalized()


def test_fuchsian_ansatz_shape():
    a = Ansatz.fuchsian(5, PHI3_HEAD, 28)
    assert a.degrees == [23, 24, 24, 23, 21, 15]
    assert a.unknown_count == 136
    assert terms_required(a) == 146


@pytest.mark.slow
def test_phiH3_operator_head():
    a = Ansatz.fuchsian(5, PHI3_HEAD, 28)
    op = minimal_operator(fit(phiH(3, 149), a).operators)
    assert op.order == 5
    head = op.head_polynomial()
    w = head.ring.gens[0]
    expected = w ** 3 * (1 - 4 * w) ** 4 * (1 + 4 * w) ** 2 * (1 - w) * (1 + 2 * w) * (1 + 3 * w + 4 * w ** 2)
    assert same_up_to_scalar(head, expected * poly_from_coeffs(PHI3_APPARENT, head.ring))


@pytest.mark.slow
def test_phiH4_operator_head():
    # x = 16 w^2; this ansatz needs 80 terms in x
    a = Ansatz.fuchsian(6, [([-4, 1], 1), ([1, -1], 4), ([0, 1], 4)], 15, variable="x", substitution_scale=16)
    assert terms_required(a) == 80
    op = minimal_operator(fit(phiH(4, 160), a).operators)
    assert op.order == 6
    head = op.head_polynomial()
    x = head.ring.gens[0]
    expected = (x - 4) * (1 - x) ** 4 * x ** 4 * poly_from_coeffs(PHI4_APPARENT, head.ring)
    assert same_up_to_scalar(head, expected)


@pytest.mark.stretch
def test_phiH5_head_contains_known_singularities_mod_p():
    p = REFERENCE_PRIMES[0]
    R = poly_ring("w")
    z0 = R.one
    for f in list_polynomial("phiH5"):
        if f not in ([0, 1], [1, -4], [1, 4]):
            z0 *= poly_from_coeffs(f, R)
    a = Ansatz.alpha_pattern(28, [[0, 1], [1, 0, -16]], [int(c.numerator) for c in poly_coeffs(z0)], 74)
    assert terms_required(a) <= 2208
    result = fit(phiH(5, 2207, p), a)
    for op in result.operators:
        head = op.head_polynomial()
        for f in list_polynomial("phiH5"):
            assert not head.rem(poly_from_coeffs(f, head.ring)), f
