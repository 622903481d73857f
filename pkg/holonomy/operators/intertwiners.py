"""
'holonomy/operators/intertwiners.py': Operator equivalences L o U = V o M.
"""
import logging
from collections import namedtuple
from typing import List, Optional, Union

from holonomy.exceptions import DomainMismatchError
from holonomy.operators.diffop import DiffOp, compose, right_divrem
from holonomy.rings.linalg import ExactMatrix
from holonomy.rings.poly import clear_denominators, poly_coeffs

logger = logging.getLogger("holonomy.operators.intertwiners")

Intertwiner = namedtuple("Intertwiner", ["U", "V"])


def _as_op(value: Union[DiffOp, int], like: DiffOp) -> DiffOp:
    return value if isinstance(value, DiffOp) else like.constant_op(value)


def verify_intertwiner(L: DiffOp, M: DiffOp, U: Union[DiffOp, int], V: Union[DiffOp, int]) -> bool:
    """True when L o U = V o M exactly (symbolically in nu for parametric operators)."""
    U, V = _as_op(U, L), _as_op(V, L)
    return compose(L, U) == compose(V, M)


def _remainder_columns(L: DiffOp, M: DiffOp, order: int, degree: int) -> List[List]:
    """Right remainders of L o t^k D^i modulo M for every unknown (i, k)."""
    K = L.field
    x = L.gen
    columns = []
    for i in range(order + 1):
        for k in range(degree + 1):
            basis = L._new([K.zero] * i + [x ** k])
            rem = right_divrem(compose(L, basis), M).remainder
            columns.append([rem[j] for j in range(M.order)])
    return columns


def search_intertwiner(L: DiffOp, M: DiffOp, order_bound: int, degree_bound: int) -> Optional[Intertwiner]:
    """
    Smallest-order U with polynomial coefficients of degree <= degree_bound such that
    M right-divides L o U; V is the quotient. None when no such U exists.
    """
    if L.parameter is not None or M.parameter is not None:
        raise DomainMismatchError("[search_intertwiner] specialize the parameter first")
    if order_bound < 0 or degree_bound < 0:
        return None
    for order in range(0, min(order_bound, max(M.order - 1, 0)) + 1):
        columns = _remainder_columns(L, M, order, degree_bound)
        flat = [c for col in columns for c in col if c]
        if not flat:
            vector = [1] + [0] * (len(columns) - 1)
        else:
            numerators, _ = clear_denominators([c for col in columns for c in col])
            width = M.order
            rows = {}
            for idx, p in enumerate(numerators):
                col, comp = divmod(idx, width)
                for deg, c in enumerate(poly_coeffs(p)):
                    if c:
                        rows.setdefault((comp, deg), [0] * len(columns))[col] = c
            basis = ExactMatrix(list(rows.values()), ncols=len(columns)).nullspace()
            if not basis:
                continue
            vector = basis[0]
        K = L.field
        x = L.gen
        coeffs = [K.zero] * (order + 1)
        for idx, c in enumerate(vector):
            i, k = divmod(idx, degree_bound + 1)
            if c:
                coeffs[i] += K.domain.convert(c) * x ** k
        U = L._new(coeffs)
        if U.is_zero():
            continue
        U = U.primitive()
        V = right_divrem(compose(L, U), M).quotient
        logger.info(f"[search_intertwiner] found U of order {U.order}")
        return Intertwiner(U, V)
    return None
