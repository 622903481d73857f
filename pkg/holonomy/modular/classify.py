"""
'modular/classify.py': Nickelian singularity sets and classification of head factors.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Union

import mpmath

from holonomy.modular.catalog import SingularityCatalog, load_catalog
from holonomy.modular.elliptic import VariableFrame, j_values_of_w_polynomial
from holonomy.modular.schemas import ClassifiedRoot, NickelianResult, RootClass
from holonomy.operators.schemas import SingularPointReport
from holonomy.rings.fields import QQ, format_rational, parse_rational
from holonomy.rings.poly import irreducible_factors, poly_coeffs, poly_from_coeffs, poly_ring

logger = logging.getLogger("holonomy.modular.classify")

DENOMINATOR_BOUND = 2 ** 31
ROOT_TOLERANCE = 1e-9


@lru_cache(maxsize=None)
def nickelian(m: int, dps: int = 60) -> NickelianResult:
    """
    Singularities 1/w = u^k + u^-k + u^j + u^-j, u = exp(2 pi i/(2m+1)), -m <= j, k <= m.

    The polynomial prod(1 - w/w_r) is rebuilt at dps digits and rationalized, then
    checked against the roots at the same precision. Roots are returned as floats
    next to their exact minimal polynomials.
    """
    if m < 1:
        raise ValueError(f"[nickelian] m must be >= 1, got {m}")
    with mpmath.workdps(dps):
        N = 2 * m + 1
        cosines = [2 * mpmath.cos(2 * mpmath.pi * a / N) for a in range(m + 1)]
        inverses = []
        for a in range(m + 1):
            for b in range(a, m + 1):
                c = cosines[a] + cosines[b]
                if abs(c) < mpmath.mpf(10) ** (-dps // 2):
                    continue
                if all(abs(c - d) > mpmath.mpf(10) ** (-dps // 2) for d in inverses):
                    inverses.append(c)
        coeffs = [mpmath.mpf(1)]
        for c in inverses:
            nxt = coeffs + [mpmath.mpf(0)]
            for i in range(len(coeffs)):
                nxt[i + 1] -= c * coeffs[i]
            coeffs = nxt
        exact = [Fraction(str(mpmath.nstr(x, dps - 5))).limit_denominator(DENOMINATOR_BOUND) for x in coeffs]
        if any(abs(mpmath.mpf(e.numerator) / e.denominator - x) > ROOT_TOLERANCE for e, x in zip(exact, coeffs)):
            raise ValueError(f"[nickelian] coefficient reconstruction failed for m={m}")
        if any(e.denominator != 1 for e in exact):
            raise ValueError(f"[nickelian] non-integral coefficient for m={m}")
        ints = [int(e) for e in exact]
        tol = mpmath.mpf(10) ** (-(dps // 2))
        roots = sorted(1 / c for c in inverses)
        for r in roots:
            value = sum(c * r ** i for i, c in enumerate(ints))
            scale = sum(abs(c) * abs(r) ** i for i, c in enumerate(ints))
            if abs(value) > tol * scale:
                raise ValueError(f"[nickelian] root {mpmath.nstr(r, 15)} does not satisfy the rebuilt polynomial")
        witnesses = [float(max(abs(abs(s) - 1) for s in VariableFrame.s_of_w(r))) for r in roots]
    factors = [
        [int(c.numerator) for c in poly_coeffs(f)]
        for f, _ in irreducible_factors(poly_from_coeffs(ints, poly_ring("w")))
    ]
    return NickelianResult(
        order=m, roots=[float(r) for r in roots], polynomial=ints, factors=factors, witnesses=witnesses
    )


def _divides(factor, m: int, R) -> bool:
    target = poly_from_coeffs(nickelian(m).polynomial, R)
    return factor.degree() <= target.degree() and not target.rem(factor)


def nickelian_order(coefficients: Sequence, bound: int) -> Optional[int]:
    """Smallest m <= bound whose Nickelian polynomial is divisible by the factor."""
    R = poly_ring("w")
    factor = poly_from_coeffs([parse_rational(c) for c in coefficients], R)
    if factor.degree() < 1:
        return None
    for m in range(1, bound + 1):
        if _divides(factor, m, R):
            return m
    return None


def _cm_value(coefficients: Sequence) -> Optional[int]:
    """Exact integer j shared by all roots, or None."""
    try:
        values = j_values_of_w_polynomial(coefficients)
    except Exception as e:
        logger.debug(f"[_cm_value] j-values unavailable: {e}")
        return None
    if not values or any(isinstance(v, str) for v in values):
        return None
    first = values[0]
    if any(v != first for v in values) or first.denominator != 1:
        return None
    return int(first.numerator)


def _numeric_roots(coefficients: Sequence) -> List[str]:
    coeffs = [float(parse_rational(c)) for c in coefficients]
    if len(coeffs) < 2:
        return []
    try:
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=60)
    except mpmath.libmp.NoConvergence:
        return []
    return [mpmath.nstr(r, 12) for r in roots]


def _factors_of(head) -> List[tuple]:
    """(coefficients, name) pairs from a report, a polynomial or a dense list."""
    if isinstance(head, SingularPointReport):
        return [(list(f.polynomial), f.name) for f in head.factors]
    if isinstance(head, (list, tuple)) and head and isinstance(head[0], (list, tuple)):
        return [([format_rational(parse_rational(c)) for c in f], None) for f in head]
    if hasattr(head, "ring"):
        poly = head
    else:
        poly = poly_from_coeffs([parse_rational(c) for c in head], poly_ring("w"))
    return [([format_rational(c) for c in poly_coeffs(f)], None) for f, _ in irreducible_factors(poly)]


def classify(
    head: Union[SingularPointReport, Sequence, object],
    n: int,
    operator=None,
    catalog: Optional[SingularityCatalog] = None,
) -> List[ClassifiedRoot]:
    """
    Class of each head factor, checked in the order apparent, cm, nickelian, catalogued, unknown.

    Args:
        head: Singular point report, polynomial, dense coefficient list, or list of factors in w.
        n: Context bound; Nickelian sets with m <= n are tried.
        operator: Optional operator for the apparent-singularity test.
    """
    from holonomy.operators.local import is_apparent

    catalog = catalog or load_catalog()
    R = poly_ring("w")
    out = []
    for coeffs, name in sorted(_factors_of(head), key=lambda item: (len(item[0]), item[0])):
        entry = catalog.lookup([int(parse_rational(c)) for c in coeffs]) if all(
            parse_rational(c).denominator == 1 for c in coeffs
        ) else None
        name = name or (entry.name if entry else None)
        roots = _numeric_roots(coeffs)
        item = dict(factor=list(coeffs), name=name, roots=roots)
        is_monomial = len(coeffs) == 2 and parse_rational(coeffs[0]) == 0
        if operator is not None and is_apparent(operator, poly_from_coeffs([parse_rational(c) for c in coeffs], R)):
            out.append(ClassifiedRoot(root_class=RootClass.APPARENT, provenance="frobenius", **item))
            continue
        j = None if is_monomial else (entry.cm_value() if entry and entry.cm_value() is not None else _cm_value(coeffs))
        if j is not None:
            out.append(ClassifiedRoot(root_class=RootClass.CM, j=j, provenance="j-resultant", **item))
            continue
        m = None if is_monomial else nickelian_order(coeffs, n)
        if m is not None:
            out.append(ClassifiedRoot(root_class=RootClass.NICKELIAN, nickelian_order=m, provenance="nickelian", **item))
            continue
        if entry is not None or is_monomial:
            out.append(ClassifiedRoot(root_class=RootClass.PHYSICAL_OTHER, provenance="catalog", **item))
            continue
        out.append(ClassifiedRoot(root_class=RootClass.UNKNOWN, provenance="unmatched", **item))
    logger.info(f"[classify] {len(out)} factors classified with bound n={n}")
    return out


def list_polynomial(tag: str, catalog: Optional[SingularityCatalog] = None) -> List[List[int]]:
    """Factors of a catalogued singularity list (variable w)."""
    catalog = catalog or load_catalog()
    return [list(e.coefficients) for e in catalog.tagged(tag, "w")]


def extra_singularities(
    tag: str, reference_tag: str, n: int, catalog: Optional[SingularityCatalog] = None
) -> List[ClassifiedRoot]:
    """
    Classified factors of list `tag` that are neither Nickelian (m <= n) nor in the
    reference list (the single-integral singularities of the same n).
    """
    catalog = catalog or load_catalog()
    reference = {tuple(c) for c in list_polynomial(reference_tag, catalog)}
    factors = [c for c in list_polynomial(tag, catalog) if tuple(c) not in reference]
    return [item for item in classify(factors, n, catalog=catalog) if item.root_class != RootClass.NICKELIAN]
