"""
'holonomy/operators/sympower.py': Symmetric powers and image operators.
"""
import logging
from typing import Dict, List, Tuple

from holonomy.exceptions import DomainMismatchError, NoSolutionError
from holonomy.operators.diffop import DiffOp, _field_nullspace, compose, right_divrem

logger = logging.getLogger("holonomy.operators.sympower")

Monomial = Tuple[int, ...]


def _derive(state: Dict[Monomial, object], reduction: List, x) -> Dict[Monomial, object]:
    """
    Derivation on polynomials in y, y', ..., y^(r-1) with y^(r) = sum_j reduction[j] y^(j).
    """
    r = len(reduction)
    out: Dict[Monomial, object] = {}

    def bump(key, value):
        v = out[key] + value if key in out else value
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    for mono, c in state.items():
        dc = c.diff(x)
        if dc:
            bump(mono, dc)
        for j, e in enumerate(mono):
            if not e:
                continue
            base = list(mono)
            base[j] -= 1
            if j + 1 < r:
                base[j + 1] += 1
                bump(tuple(base), c * e)
            else:
                for k, a in enumerate(reduction):
                    if not a:
                        continue
                    target = list(base)
                    target[k] += 1
                    bump(tuple(target), c * e * a)
    return out


def sym_power(L: DiffOp, j: int) -> DiffOp:
    """
    Minimal operator annihilating every product of j solutions of L.

    Derivatives of y^j are reduced against L (as polynomials in y, ..., y^(r-1))
    until the first linear relation over the coefficient field appears.

    Raises:
        DomainMismatchError: If j < 1 or L has order 0.
    """
    if j < 1:
        raise DomainMismatchError(f"[sym_power] power must be >= 1, got {j}")
    if L.order < 1:
        raise DomainMismatchError("[sym_power] operator must have positive order")
    if j == 1:
        return L.normalized()
    K = L.field
    x = L.gen
    monic = L.monic()
    reduction = [-monic[i] for i in range(L.order)]
    start = tuple([j] + [0] * (L.order - 1))
    states = [{start: K.one}]
    seen: List[Monomial] = [start]
    while True:
        states.append(_derive(states[-1], reduction, x))
        for mono in states[-1]:
            if mono not in seen:
                seen.append(mono)
        rows = [[state.get(mono, K.zero) for state in states] for mono in seen]
        basis = _field_nullspace(rows, K)
        if basis:
            logger.info(f"[sym_power] order {L.order}, power {j} -> order {len(states) - 1}")
            return L._new(basis[0]).normalized()


def image_operator(M: DiffOp, Q: DiffOp) -> DiffOp:
    """
    Minimal operator annihilating {Q(y) : M(y) = 0}, from D^k o Q reduced modulo M.

    Raises:
        NoSolutionError: If Q maps every solution of M to zero.
    """
    if M.order < 1:
        raise DomainMismatchError("[image_operator] M must have positive order")
    K = M.field
    d = M._new([K.zero, K.one])
    current = right_divrem(Q, M).remainder
    if current.is_zero():
        raise NoSolutionError("[image_operator] the map kills every solution")
    vectors = [[current[i] for i in range(M.order)]]
    for _ in range(M.order):
        current = right_divrem(compose(d, current), M).remainder
        vectors.append([current[i] for i in range(M.order)])
        rows = [[v[i] for v in vectors] for i in range(M.order)]
        basis = _field_nullspace(rows, K)
        if basis:
            return M._new(basis[0]).normalized()
    raise NoSolutionError("[image_operator] no relation up to the order of M")
