"""
'suites/pvi.py': Sigma-form residuals of correlation series and Kramers-Wannier covariance.
"""
import logging
from itertools import product
from typing import Iterable, Optional, Tuple

import sympy

from holonomy.exceptions import DomainMismatchError
from holonomy.generators.formfactors import lambda_correlation, pvi_expression, pvi_lambda_coefficient, sigma_corrections
from holonomy.generators.schemas import Branch
from holonomy.rings.fields import QQ, format_rational, parse_rational
from holonomy.rings.series import Series
from holonomy.suites.schemas import PviResidual, SuiteCell, SuiteReport
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.suites.pvi")

QUARTER = QQ(1, 4)
DEFAULT_LAMBDAS = ("0", "1/3", "1/2", "1")


def sigma_from_correlation(C: Series, N: int, branch: Branch) -> Series:
    """
    sigma = t(t-1) C'/C - t/4 below Tc, - 1/4 above Tc.

    C is split as t^e h(t) with h an unramified series, so
    sigma = e (t-1) + t(t-1) h'/h - offset.

    Raises:
        DomainMismatchError: If the leading behaviour of C does not belong to the branch.
    """
    branch = Branch(branch)
    e = C.leading_exponent()
    if e is None:
        raise DomainMismatchError("[sigma_from_correlation] the correlation vanishes identically")
    expected = QQ(0) if branch == Branch.BELOW else QQ(N, 2)
    if e != expected:
        raise DomainMismatchError(
            f"[sigma_from_correlation] C starts at t^{format_rational(e)}, the {branch.value} branch needs t^{format_rational(expected)}"
        )
    if branch == Branch.BELOW and C.leading_coefficient() != C.domain.one:
        raise DomainMismatchError("[sigma_from_correlation] C_- must start with 1")
    h = C.strip().mul_power(-e).unramify()
    if h.ramification != 1:
        raise DomainMismatchError("[sigma_from_correlation] C / t^e is not a series in integer powers of t")
    order = h.order
    logd = h.log_derivative().mul_power(1)
    sigma = logd.mul_power(1) - logd
    if e:
        sigma = sigma + Series.from_polynomial([-e, e], order, h.variable)
    if branch == Branch.BELOW:
        return sigma + Series.from_polynomial([0, -QUARTER], order, h.variable)
    return sigma - QUARTER


def pvi_residual(C: Series, N: int, branch: Branch, source: str = "series") -> PviResidual:
    """
    Substitute the sigma of C into the sigma form of Painleve VI at N.

    Returns:
        PviResidual whose residual series is zero for a genuine correlation.
    """
    sigma = sigma_from_correlation(C, N, branch)
    residual = pvi_expression(sigma, N)
    out = PviResidual(N=N, branch=Branch(branch), source=source, sigma=sigma, residual=residual)
    if not out.vanishes:
        logger.info(f"[pvi_residual] N={N} {Branch(branch).value}: residual starts at t^{out.first_nonzero()}")
    return out


def lambda_residuals(branch: Branch, N: int, order: int) -> Tuple[int, bool]:
    """
    Check every lambda^2 coefficient of the sigma form separately.

    Returns:
        (number of lambda orders checked, all of them vanish)
    """
    sigmas = sigma_corrections(branch, N, order)
    ok = all(pvi_lambda_coefficient(sigmas, N, K).is_zero() for K in range(len(sigmas)))
    return len(sigmas), ok


def pvi_suite(
    Ns: Iterable[int] = (0, 1, 2),
    lambdas: Iterable[str] = DEFAULT_LAMBDAS,
    branches: Iterable[str] = ("below", "above"),
    order: int = 40,
) -> SuiteReport:
    """Residuals of lambda_correlation over branch x N x lambda."""
    cells = []
    with timed_event("pvi suite", {"order": order}):
        for branch, N, lam in product(branches, Ns, lambdas):
            C = lambda_correlation(Branch(branch), N, parse_rational(lam), order)
            res = pvi_residual(C, N, branch, source=f"lambda_correlation(lambda={lam})")
            cells.append(SuiteCell.of(
                res.vanishes,
                {"branch": branch, "N": N, "lambda": lam, "order": order},
                precision=format_rational(res.residual.precision),
                first_nonzero=res.first_nonzero(),
            ))
    return SuiteReport(suite="pvi", cells=cells)


# -- Kramers-Wannier ---------------------------------------------------------------------------
def pvi_polynomial(nu: Optional[object] = None):
    """
    The sigma form as a polynomial in t, s0, s1, s2 (and nu unless a value is given).

    Returns:
        (expression, (t, s0, s1, s2))
    """
    t, s0, s1, s2 = sympy.symbols("t s0 s1 s2")
    nu = sympy.Symbol("nu") if nu is None else sympy.Rational(str(nu))
    P = (t * (t - 1) * s2) ** 2 - (
        nu * ((t - 1) * s1 - s0) ** 2
        - 4 * s1 * ((t - 1) * s1 - s0 - sympy.Rational(1, 4)) * (t * s1 - s0)
    )
    return sympy.expand(P), (t, s0, s1, s2)


def kw_transform(P, symbols):
    """(t, s, s', s'') -> (1/t, s/t, s - t s', t^3 s'') applied simultaneously."""
    t, s0, s1, s2 = symbols
    return P.subs({t: 1 / t, s0: s0 / t, s1: s0 - t * s1, s2: t ** 3 * s2}, simultaneous=True)


def _monomial_in(expr, t) -> bool:
    if expr.free_symbols - {t}:
        return False
    return sympy.Poly(expr, t).is_monomial


def kw_covariance_check(nu: Optional[object] = None) -> bool:
    """
    True when the sigma form is invariant under the duality map up to a power of t.

    Exact polynomial identity; nu is symbolic unless a value is given.
    """
    P, symbols = pvi_polynomial(nu)
    t = symbols[0]
    ratio = sympy.cancel(sympy.together(kw_transform(P, symbols)) / P)
    numer, denom = sympy.fraction(ratio)
    ok = _monomial_in(sympy.expand(numer), t) and _monomial_in(sympy.expand(denom), t)
    logger.info(f"[kw_covariance_check] nu={'symbolic' if nu is None else nu}: factor {ratio}, ok={ok}")
    return ok


def kw_spot_check(t=2, s=(1, 2, 3), nu=4) -> Tuple:
    """(P, transformed P) evaluated at one rational point."""
    P, symbols = pvi_polynomial(nu)
    values = dict(zip(symbols, [sympy.Rational(str(v)) for v in (t, *s)]))
    return P.subs(values), kw_transform(P, symbols).subs(values)


def kw_suite() -> SuiteReport:
    cells = [
        SuiteCell.of(kw_covariance_check(), {"nu": "symbolic"}),
        SuiteCell.of(kw_covariance_check(0), {"nu": "0"}),
    ]
    a, b = kw_spot_check()
    cells.append(SuiteCell.of(a == b, {"t": "2", "s": ["1", "2", "3"], "nu": "4"}, original=str(a), transformed=str(b)))
    return SuiteReport(suite="kw", cells=cells)
