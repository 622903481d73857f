"""
'suites/theta.py': The N = 0 correlation below Tc against a ratio of Jacobi theta functions.
"""
import logging
from typing import Dict, Iterable, List

import mpmath

from holonomy.generators.formfactors import lambda_correlation
from holonomy.generators.schemas import Branch
from holonomy.modular.elliptic import nome_tau
from holonomy.rings.fields import format_rational, parse_rational
from holonomy.suites.schemas import SuiteCell, SuiteReport, ThetaCheck
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.suites.theta")

THETA_TOLERANCE = 1e-8
THETA_DPS = 30

# Candidate readings of the modulus in terms of t.
NOME_CONVENTIONS = {
    "k2=t": lambda t: mpmath.sqrt(t),
    "k=t": lambda t: t,
}


def theta_ratio(u, q):
    """theta_3(u, q) / theta_3(0, q) with theta_3(u, q) = 1 + 2 sum q^(k^2) cos(2ku)."""
    return mpmath.jtheta(3, u, q) / mpmath.jtheta(3, 0, q)


def _nome(convention: str, t):
    return mpmath.re(nome_tau(NOME_CONVENTIONS[convention](t), dps=THETA_DPS).q)


def theta_ratio_check(lam="1/2", t="1/10", order: int = 60) -> ThetaCheck:
    """
    Compare C_-(0,0;lambda) at t with theta_3(u,q)/theta_3(0,q), lambda = cos u.

    Every nome convention is tried; the one closest to the series is reported
    together with the deviations of the others.

    Args:
        lam: Rational lambda with |lambda| <= 1.
        t: Sample point in (0, 1); the series is only accurate for small t.
        order: Truncation order of the lambda-extended series.

    Returns:
        ThetaCheck
    """
    lam_q, t_q = parse_rational(lam), parse_rational(t)
    if abs(lam_q) > 1:
        raise ValueError(f"[theta_ratio_check] |lambda| = {format_rational(abs(lam_q))} exceeds 1")
    if not 0 < t_q < 1:
        raise ValueError(f"[theta_ratio_check] t = {format_rational(t_q)} outside (0, 1)")
    C = lambda_correlation(Branch.BELOW, 0, lam_q, order)
    with mpmath.workdps(THETA_DPS):
        tv = mpmath.mpf(int(t_q.numerator)) / int(t_q.denominator)
        u = mpmath.acos(mpmath.mpf(int(lam_q.numerator)) / int(lam_q.denominator))
        value = C.evaluate(tv, dps=THETA_DPS)
        candidates: Dict[str, float] = {}
        for name in NOME_CONVENTIONS:
            q = _nome(name, tv)
            candidates[name] = float(abs(value - theta_ratio(u, q)))
    best = min(candidates, key=lambda k: (candidates[k], k))
    logger.info(f"[theta_ratio_check] lambda={lam} t={t} order={order}: {candidates}")
    return ThetaCheck(
        lam=format_rational(lam_q),
        t=format_rational(t_q),
        order=order,
        series_value=float(value),
        candidates=candidates,
        convention=best,
        deviation=candidates[best],
    )


def theta_convergence(lam="1/2", t="1/10", orders: Iterable[int] = (20, 40, 60)) -> List[ThetaCheck]:
    """Deviation of the best convention at increasing truncation orders."""
    return [theta_ratio_check(lam, t, T) for T in orders]


def theta_suite(
    lambdas: Iterable[str] = ("1", "-1", "1/2"),
    t: str = "1/10",
    order: int = 60,
    tolerance: float = THETA_TOLERANCE,
) -> SuiteReport:
    cells = []
    with timed_event("theta suite", {"order": order}):
        for lam in lambdas:
            check = theta_ratio_check(lam, t, order)
            cells.append(SuiteCell.of(
                check.deviation < tolerance,
                {"lambda": check.lam, "t": check.t, "order": order},
                convention=check.convention,
                candidates=check.candidates,
                deviation=check.deviation,
            ))
        trend = theta_convergence("1/2", t)
        deviations = [c.deviation for c in trend]
        floor = 10.0 ** (5 - THETA_DPS)
        monotone = all(b <= max(a, floor) for a, b in zip(deviations, deviations[1:]))
        cells.append(SuiteCell.of(monotone, {"lambda": "1/2", "t": t, "orders": [c.order for c in trend]}, deviations=deviations))
    return SuiteReport(suite="theta", cells=cells, tolerance=tolerance)
