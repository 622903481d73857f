"""
'fitting/service.py': Series to linear ODE guessing.

The unknown coefficients of sum_i z_i p_i D^i are determined by the linear
conditions that the operator applied to the series vanishes coefficientwise.
Small rational systems are solved fraction free, larger ones modulo several
primes, lifted by rational reconstruction and checked by applying the result.
"""
import logging
from collections import Counter
from math import prod
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from holonomy.exceptions import (
    ERROR_MESSAGES,
    BadPrimeError,
    DomainMismatchError,
    NoSolutionError,
    ReconstructionError,
    TruncationError,
)
from holonomy.fitting.schemas import Ansatz, FitMethod, FitResult
from holonomy.operators.diffop import DiffOp, annihilates, gcrd
from holonomy.rings.fields import default_primes, iter_primes, rational_reconstruct, to_domain, to_int
from holonomy.rings.linalg import ExactMatrix, nullspace_mod_p
from holonomy.rings.series import Series
from holonomy.utils.events import add_event, timed_event

logger = logging.getLogger("holonomy.fitting.service")

DEFAULT_MARGIN = 10
EXACT_LIMIT = 48
MAX_PRIMES = 12
PRIME_ATTEMPTS = 5

SeriesSource = Callable[[int], Series]


def terms_required(a: Ansatz, margin: int = DEFAULT_MARGIN) -> int:
    """Series coefficients needed for an overdetermined system: unknowns + margin."""
    return a.unknown_count + margin


def prepare_series(s: Series, a: Ansatz) -> Series:
    """
    Bring a series into the variable of the ansatz.

    Raises:
        DomainMismatchError: For shifted or ramified input, or a variable mismatch.
    """
    if s.shift != 0 or s.ramification != 1:
        raise DomainMismatchError("[prepare_series] fits need an unshifted, unramified power series")
    if a.substitution_scale is not None:
        target = a.variable or "x"
        if s.variable != target:
            s = s.compress(2, a.substitution_scale).rename(target)
    elif a.variable is not None and a.variable != s.variable:
        raise DomainMismatchError(f"[prepare_series] ansatz in {a.variable}, series in {s.variable}")
    return s


def _dense_mul(a: Sequence, b: Sequence, zero) -> List:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _weighted_derivatives(s: Series, a: Ansatz, rows: int) -> List[List]:
    """Coefficients of z_i * s^(i) up to var^(rows-1), one list per i."""
    dom = s.domain
    c = s.coefficients
    out = []
    for i in range(a.order + 1):
        deriv = [to_domain(prod(range(n + 1, n + i + 1)), dom) * c[n + i] for n in range(rows)]
        pre = [to_domain(x, dom) for x in a.prefactor(i)]
        out.append(_dense_mul(pre, deriv, dom.zero)[:rows])
    return out


def system_rows(s: Series, a: Ansatz) -> List[List]:
    """
    The linear system of a fit: one row per coefficient of the applied operator.

    Column (i, k) is the unknown coefficient of var^k in p_i.
    """
    rows = len(s) - a.order
    g = _weighted_derivatives(s, a, rows)
    zero = s.domain.zero
    columns = [(i, k) for i, d in enumerate(a.degrees) for k in range(d + 1)]
    return [[g[i][m - k] if m >= k and m - k < len(g[i]) else zero for i, k in columns] for m in range(rows)]


def operator_from_vector(vector: Sequence, a: Ansatz, variable: str, domain) -> DiffOp:
    """Assemble z_i * p_i from a solution vector, in primitive form."""
    polys, pos = [], 0
    for i, d in enumerate(a.degrees):
        unknown = [to_domain(x, domain) for x in vector[pos:pos + d + 1]]
        pos += d + 1
        pre = [to_domain(x, domain) for x in a.prefactor(i)]
        polys.append(_dense_mul(pre, unknown, domain.zero))
    return DiffOp.from_dense(polys, variable, domain).primitive()


def _check_terms(s: Series, a: Ansatz, margin: int) -> None:
    need = terms_required(a, margin)
    if len(s) < need:
        raise TruncationError(f"[fit] {ERROR_MESSAGES['terms']}: have {len(s)}, need {need}")


def _solve_mod_p(s: Series, a: Ansatz) -> List[List[int]]:
    ints = [[to_int(x, s.domain) for x in row] for row in system_rows(s, a)]
    return nullspace_mod_p(ints, s.prime)


def fit(
    s: Series,
    a: Ansatz,
    margin: int = DEFAULT_MARGIN,
    exact_limit: int = EXACT_LIMIT,
    primes: Optional[Sequence[int]] = None,
) -> FitResult:
    """
    Find every operator of the ansatz shape annihilating the series.

    Args:
        s: Exact or mod-p power series.
        a: Shape of the sought operator.
        margin: Rows demanded beyond the unknown count.
        exact_limit: Largest rational system solved without primes.
        primes: Primes for lifting larger rational systems.

    Returns:
        FitResult: Independent operators, primitive with positive head leading coefficient.

    Raises:
        TruncationError: If the series is too short for the ansatz.
        NoSolutionError: If no operator of this shape exists.
    """
    s = prepare_series(s, a)
    _check_terms(s, a, margin)
    variable = s.variable
    if s.prime is None and a.unknown_count > exact_limit:
        p0 = s
        return lift_fit(lambda p: p0.reduce(p), a, list(primes or default_primes()), exact=p0, margin=margin)

    rows = len(s) - a.order
    with timed_event("fit", {"order": a.order, "unknowns": a.unknown_count, "rows": rows, "prime": s.prime}):
        if s.prime is None:
            vectors = ExactMatrix(system_rows(s, a), QQ, ncols=a.unknown_count).nullspace()
            method = FitMethod.EXACT
        else:
            vectors = _solve_mod_p(s, a)
            method = FitMethod.MODULAR
    if not vectors:
        raise NoSolutionError(f"[fit] {ERROR_MESSAGES['nullspace']}: order {a.order}, degrees {a.degrees}")
    operators = [operator_from_vector(v, a, variable, s.domain) for v in vectors]
    logger.info(f"[fit] {method.value} fit of order {a.order}: {len(operators)} operator(s)")
    return FitResult(
        operators=operators, prime=s.prime, method=method, terms=len(s),
        margin=rows - a.unknown_count, unknowns=a.unknown_count,
    )


def minimal_operator(candidates: Sequence[DiffOp]) -> DiffOp:
    """
    GCRD of operators annihilating the same series.

    Raises:
        NoSolutionError: If no candidate is given.
    """
    if not candidates:
        raise NoSolutionError("[minimal_operator] no candidate operators")
    if len(candidates) == 1:
        return candidates[0]
    result = candidates[0]
    for op in candidates[1:]:
        result = gcrd(result, op)
    return result.primitive()


def _signature(vectors: List[List[int]]) -> Tuple:
    return len(vectors), tuple(next(i for i, x in enumerate(v) if x) for v in vectors)


def _log_rejected(retry_state) -> None:
    logger.warning(f"[multi_prime_fit] prime rejected: {retry_state.outcome.exception()}")


def _next_solution(prime_iter: Iterator[int], generator: SeriesSource, a: Ansatz, margin: int):
    """Fit at the next usable prime; a BadPrimeError moves on to a fresh prime."""
    retrying = Retrying(
        retry=retry_if_exception_type(BadPrimeError),
        stop=stop_after_attempt(PRIME_ATTEMPTS),
        after=_log_rejected,
        reraise=True,
    )
    for attempt in retrying:
        with attempt:
            p = next(prime_iter)
            s = generator(p)
            if s.prime is None:
                s = s.reduce(p)
            elif s.prime != p:
                raise BadPrimeError(f"[multi_prime_fit] source returned a series mod {s.prime} for {p}")
            s = prepare_series(s, a)
            _check_terms(s, a, margin)
            return p, s, _solve_mod_p(s, a)


def _majority(solutions: Dict[int, Tuple[Tuple, List]]) -> Optional[Tuple]:
    counts = Counter(sig for sig, _ in solutions.values()).most_common()
    if not counts or counts[0][1] < 2:
        return None
    if len(counts) > 1 and counts[1][1] == counts[0][1]:
        return None
    return counts[0][0]


def _lift(solutions: Dict[int, Tuple[Tuple, List]], signature: Tuple) -> Optional[List[List]]:
    primes = sorted(p for p, (sig, _) in solutions.items() if sig == signature)
    nullity = signature[0]
    width = len(solutions[primes[0]][1][0])
    lifted = []
    try:
        for j in range(nullity):
            lifted.append([
                rational_reconstruct([(solutions[p][1][j][c], p) for p in primes]) for c in range(width)
            ])
    except ReconstructionError:
        return None
    return lifted


def _verified(operators: List[DiffOp], exact: Optional[Series], check: Optional[Series]) -> bool:
    if exact is not None:
        return all(annihilates(op, exact) for op in operators)
    try:
        return all(annihilates(op.reduce(check.prime), check) for op in operators)
    except BadPrimeError:
        return False


def lift_fit(
    generator: SeriesSource,
    a: Ansatz,
    primes: Sequence[int],
    exact: Optional[Series] = None,
    margin: int = DEFAULT_MARGIN,
    max_primes: int = MAX_PRIMES,
) -> FitResult:
    """
    Fit modulo successive primes and lift the aligned nullspace vectors to rationals.

    Primes are drawn from `primes`, then from fresh primes below the largest one,
    until the reconstruction is stable and verified or `max_primes` fits were made.

    Args:
        generator: Returns the series modulo a given prime (or the rational series).
        a: Shape of the sought operator.
        primes: At least two starting primes.
        exact: Rational series the lifted operators must annihilate; without it a
            further prime is used for the check.

    Raises:
        DomainMismatchError: With fewer than two primes.
        NoSolutionError: If a prime shows no operator of this shape.
        ReconstructionError: On a persistent cross-prime shape mismatch or failed lift.
    """
    if len(set(primes)) < 2:
        raise DomainMismatchError("[multi_prime_fit] needs at least two distinct primes")
    if exact is not None:
        exact = prepare_series(exact, a)
    prime_iter = iter_primes(list(primes))
    solutions: Dict[int, Tuple[Tuple, List]] = {}
    variable, terms = a.variable, 0
    with timed_event("multi_prime_fit", {"order": a.order, "unknowns": a.unknown_count}) as info:
        while len(solutions) < max_primes:
            p, s, vectors = _next_solution(prime_iter, generator, a, margin)
            variable, terms = s.variable, len(s)
            if not vectors:
                raise NoSolutionError(f"[multi_prime_fit] {ERROR_MESSAGES['nullspace']} modulo {p}")
            solutions[p] = (_signature(vectors), vectors)
            add_event("DEBUG", "prime fitted", {"prime": p, "nullity": len(vectors)})
            signature = _majority(solutions)
            if signature is None:
                continue
            lifted = _lift(solutions, signature)
            if lifted is None:
                continue
            operators = [operator_from_vector(v, a, variable, QQ) for v in lifted]
            check = None
            if exact is None:
                _, check, _ = _next_solution(prime_iter, generator, a, margin)
            if _verified(operators, exact, check):
                used = sorted(q for q, (sig, _) in solutions.items() if sig == signature)
                info["primes"] = len(used)
                logger.info(f"[multi_prime_fit] lifted {len(operators)} operator(s) from {len(used)} primes")
                return FitResult(
                    operators=operators, prime=None, method=FitMethod.LIFTED, terms=terms,
                    margin=terms - a.order - a.unknown_count, unknowns=a.unknown_count, primes_used=used,
                )
    if _majority(solutions) is None:
        raise ReconstructionError(f"[multi_prime_fit] {ERROR_MESSAGES['shape']}")
    raise ReconstructionError(f"[multi_prime_fit] {ERROR_MESSAGES['reconstruction']} ({len(solutions)} primes)")


def multi_prime_fit(
    generator: SeriesSource,
    a: Ansatz,
    primes: Sequence[int],
    exact: Optional[Series] = None,
    margin: int = DEFAULT_MARGIN,
    max_primes: int = MAX_PRIMES,
) -> DiffOp:
    """The lifted rational operator of smallest order found by `lift_fit`."""
    return minimal_operator(lift_fit(generator, a, primes, exact, margin, max_primes).operators)


def degree_scan(
    s: Series,
    orders: Sequence[int],
    max_degree: int,
    margin: int = DEFAULT_MARGIN,
    primes: Optional[Sequence[int]] = None,
    substitution_scale: Optional[int] = None,
) -> FitResult:
    """
    Search dense ansatze: degrees 0..max_degree for the first order, then the next order.

    Raises:
        NoSolutionError: If no cell with enough terms admits an operator.
    """
    for q in orders:
        for d in range(max_degree + 1):
            a = Ansatz.dense(q, d, substitution_scale=substitution_scale)
            try:
                return fit(s, a, margin=margin, primes=primes)
            except NoSolutionError:
                continue
            except TruncationError:
                logger.info(f"[degree_scan] order {q} exhausted the series at degree {d}")
                break
    raise NoSolutionError(f"[degree_scan] no operator for orders {list(orders)} up to degree {max_degree}")
