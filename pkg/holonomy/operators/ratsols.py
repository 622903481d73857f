"""
'holonomy/operators/ratsols.py': Rational solutions and peeling of first-order right factors.
"""
import logging
from collections import namedtuple
from typing import List, Optional

from holonomy.operators.diffop import DiffOp, right_divrem
from holonomy.operators.local import INFINITY, indicial
from holonomy.rings.linalg import ExactMatrix
from holonomy.rings.poly import clear_denominators, irreducible_factors, poly_coeffs

logger = logging.getLogger("holonomy.operators.ratsols")

DEFAULT_DEGREE_BOUND = 20

FactorChain = namedtuple("FactorChain", ["factors", "complete", "remainder"])


def _apply_rational(L: DiffOp, y):
    total = L.field.zero
    x = L.gen
    deriv = y
    for i, a in enumerate(L.coefficients):
        if i:
            deriv = deriv.diff(x)
        if a and deriv:
            total += a * deriv
    return total


def _denominator_bound(L: DiffOp):
    """Product of f^(-e) over head factors f whose smallest integer exponent e is negative."""
    head = L.head_polynomial()
    R = head.ring
    den = R.one
    for f, _ in irreducible_factors(head):
        data = indicial(L, f)
        ints = [e for e in data.exponents if e.denominator == 1]
        if ints and min(ints) < 0:
            den *= f ** int(-min(ints))
    return den


def _numerator_degree(L: DiffOp, den_degree: int, fallback: int) -> int:
    data = indicial(L, INFINITY)
    if not data.regular:
        return den_degree + fallback
    ints = [e for e in data.exponents if e.denominator == 1]
    if not ints:
        return -1
    return den_degree - int(min(ints))


def rational_solutions(L: DiffOp, degree_bound: Optional[int] = None) -> List:
    """
    Basis of the rational solutions of L, as elements of its coefficient field.

    The denominator comes from negative integer exponents at the finite singular
    points, the numerator degree from the exponents at infinity.
    """
    if L.order < 1:
        return []
    den = _denominator_bound(L)
    bound = _numerator_degree(L, den.degree(), DEFAULT_DEGREE_BOUND if degree_bound is None else degree_bound)
    if degree_bound is not None:
        bound = min(bound, den.degree() + degree_bound)
    if bound < 0:
        return []
    K = L.field
    x = L.gen
    den_k = K(den)
    images = [_apply_rational(L, x ** k / den_k) for k in range(bound + 1)]
    if not any(images):
        basis = [[1 if j == k else 0 for j in range(bound + 1)] for k in range(bound + 1)]
    else:
        numerators, _ = clear_denominators(images)
        rows = {}
        for col, p in enumerate(numerators):
            for deg, c in enumerate(poly_coeffs(p)):
                if c:
                    rows.setdefault(deg, [0] * (bound + 1))[col] = c
        basis = ExactMatrix(list(rows.values()), ncols=bound + 1).nullspace()
    out = []
    for vector in basis:
        numer = K.zero
        for k, c in enumerate(vector):
            if c:
                numer += K.domain.convert(c) * x ** k
        y = numer / den_k
        if not _apply_rational(L, y):
            out.append(y)
    logger.info(f"[rational_solutions] {len(out)} solutions (numerator degree <= {bound})")
    return out


def factor_first_order_chain(L: DiffOp) -> FactorChain:
    """
    Peel right factors D - y'/y from rational solutions y until order one.

    Returns:
        FactorChain with factors listed left to right (their composition is L),
        `complete` when every factor has order one, and the unfactored left quotient otherwise.
    """
    K = L.field
    x = L.gen
    rights: List[DiffOp] = []
    current = L
    while current.order > 1:
        sols = rational_solutions(current)
        if not sols:
            break
        y = sols[0]
        right = L._new([-(y.diff(x) / y), K.one])
        quotient, remainder = right_divrem(current, right)
        if not remainder.is_zero():
            break
        rights.insert(0, right)
        current = quotient
    complete = current.order <= 1
    factors = [current] + rights
    logger.info(f"[factor_first_order_chain] {len(rights)} right factors peeled, complete={complete}")
    return FactorChain(factors, complete, None if complete else current)
