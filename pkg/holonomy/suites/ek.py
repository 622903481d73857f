"""
'suites/ek.py': Polynomial expressions of form factors in the complete elliptic integrals E and K.

The target f is sought as f = sum_{a+b<=h} p_ab(t) E^a K^b / (c t^d (1-t)^e). For
each denominator shape, tried in order of d + e, the coefficient degree g is raised
until the truncated linear system has a solution with a nonzero f component.
"""
import logging
from typing import List, Optional, Tuple

from holonomy.exceptions import BadPrimeError, DomainMismatchError, NoSolutionError, TruncationError
from holonomy.generators.formfactors import formfactor
from holonomy.generators.hypergeometric import elliptic_EK
from holonomy.generators.schemas import Branch, FormFactorRequest
from holonomy.rings.fields import QQ, integer_content, prime_field, to_domain
from holonomy.rings.linalg import ExactMatrix
from holonomy.rings.series import Series
from holonomy.suites.schemas import EKExpression, EKTerm, SuiteCell, SuiteReport
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.suites.ek")

EK_MARGIN = 4
SCREEN_PRIME = 2147483647
PRINTED_DENOMINATORS = {0: (2, 0), 1: (2, 0), 2: (6, 1), 3: (90, 2), 4: (3150, 3)}


def monomials(h: int) -> List[Tuple[int, int]]:
    """(a, b) with a + b <= h, sorted by total degree then by the power of E."""
    return [(a, s - a) for s in range(h + 1) for a in range(s + 1)]


def _shapes(max_t: int, max_one_minus_t: int) -> List[Tuple[int, int]]:
    pairs = [(d, e) for d in range(max_t + 1) for e in range(max_one_minus_t + 1)]
    return sorted(pairs, key=lambda p: (p[0] + p[1], p[1]))


def _solvable_mod_p(matrix: ExactMatrix) -> bool:
    """An empty nullspace modulo a prime rules out a rational solution."""
    try:
        field = prime_field(SCREEN_PRIME)
        reduced = ExactMatrix(
            [[to_domain(x, field) for x in row] for row in matrix.rows], domain=field, ncols=matrix.ncols
        )
    except BadPrimeError:
        return True
    return bool(reduced.nullspace())


def _solve(target: Series, powers: List[Series], shape: Tuple[int, int], degree: int) -> Optional[List]:
    """
    Nullspace vector (c_ab,k ..., f) of the truncated system, or None.

    Raises:
        TruncationError: When the monomials alone are dependent at this truncation.
    """
    d, e = shape
    order = target.order
    rows = order + 1
    factor = Series.from_polynomial([0] * d + [1], order, target.variable)
    if e:
        factor = factor * Series.from_polynomial([1, -1], order, target.variable) ** e
    scaled = factor * target
    zero = QQ(0)
    columns = []
    for p in powers:
        for k in range(degree + 1):
            columns.append([p.coefficients[m - k] if m >= k else zero for m in range(rows)])
    columns.append([-c for c in scaled.coefficients[:rows]])
    matrix = ExactMatrix([[col[m] for col in columns] for m in range(rows)], ncols=len(columns))
    if not _solvable_mod_p(matrix):
        return None
    basis = matrix.nullspace()
    if not basis:
        return None
    if len(basis) > 1 or not basis[0][-1]:
        raise TruncationError(f"[fit_EK] monomials are dependent at {rows} terms with degree {degree}")
    return basis[0]


def _normalize(vector: List, monos: List[Tuple[int, int]], degree: int, shape: Tuple[int, int], h: int) -> EKExpression:
    """Integer numerators P_ab and c > 0 with sum P_ab E^a K^b = c t^d (1-t)^e f."""
    lead = vector[-1]
    values = [QQ.convert(v) / lead for v in vector[:-1]]
    den, content = integer_content(values)
    if content == 0:
        raise NoSolutionError("[fit_EK] the solution has no monomial support")
    c = QQ(den, content)
    lift = QQ(den, content) * int(c.denominator)
    terms = []
    for idx, (a, b) in enumerate(monos):
        coeffs = [int((values[idx * (degree + 1) + k] * lift).numerator) for k in range(degree + 1)]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if coeffs:
            terms.append(EKTerm(e_power=a, k_power=b, numerator=coeffs))
    return EKExpression(
        terms=terms, homogeneity=h, denominator=int(c.numerator), t_power=shape[0], one_minus_t_power=shape[1],
    )


def fit_EK(target: Series, h: int = 2, max_t_power: int = 4, max_one_minus_t_power: int = 1, margin: int = EK_MARGIN) -> EKExpression:
    """
    Express an exact series as a polynomial in E and K over Q(t).

    Args:
        target: Unramified, unshifted series in t.
        h: Bound on the total degree a + b of E^a K^b.
        max_t_power, max_one_minus_t_power: Allowed denominator t^d (1-t)^e.

    Returns:
        EKExpression: The first solution in (d + e, degree) order, normalized to integer numerators.

    Raises:
        NoSolutionError: If no expression exists within the bounds and the available terms.
    """
    if target.ramification != 1 or target.shift != 0:
        raise DomainMismatchError("[fit_EK] target must be an unramified series in integer powers of t")
    if target.prime is not None:
        raise DomainMismatchError("[fit_EK] target must be exact")
    monos = monomials(h)
    order = target.order
    E, K = elliptic_EK(order, target.variable)
    powers = [(E ** a) * (K ** b) for a, b in monos]
    with timed_event("fit_EK", {"terms": order + 1, "h": h}):
        for shape in _shapes(max_t_power, max_one_minus_t_power):
            degree = 0
            while len(monos) * (degree + 1) + 1 + margin <= order + 1:
                try:
                    vector = _solve(target, powers, shape, degree)
                except TruncationError as e:
                    logger.debug(f"[fit_EK] shape {shape}: {e}")
                    break
                if vector is not None:
                    expr = _normalize(vector, monos, degree, shape, h)
                    logger.info(f"[fit_EK] found denominator {expr.denominator} t^{shape[0]} (1-t)^{shape[1]}, degree {degree}")
                    return expr
                degree += 1
    raise NoSolutionError(f"[fit_EK] no expression with a+b <= {h} and denominator within t^{max_t_power} (1-t)^{max_one_minus_t_power}")


def ek_suite(Ns=(0, 1, 2, 3, 4), order: int = 50) -> SuiteReport:
    """fit_EK on f^(2)_{N,N} against the printed normalizations."""
    cells = []
    E, K = elliptic_EK(order)
    for N in Ns:
        f2 = formfactor(FormFactorRequest(branch=Branch.BELOW, j=2, N=N, order=order))
        expr = fit_EK(f2, 2, 4, 1)
        reproduced = expr.evaluate(E, K).agree(f2)
        expected = PRINTED_DENOMINATORS.get(N)
        matches = expected is None or (expr.denominator, expr.t_power) == expected
        cells.append(SuiteCell.of(
            reproduced and matches and expr.one_minus_t_power == 0,
            {"N": N, "order": order},
            expression=expr.to_text(),
            denominator=expr.denominator,
            t_power=expr.t_power,
        ))
    return SuiteReport(suite="ek", cells=cells)
