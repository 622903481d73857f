"""
'suites/structure.py': Russian-doll factorizations and direct-sum decompositions of form-factor operators.
"""
import logging
from functools import reduce
from itertools import combinations
from typing import Dict, Iterable, Sequence, Tuple

from holonomy.generators.formfactors import formfactor
from holonomy.generators.schemas import Branch, FormFactorRequest
from holonomy.operators.diffop import DiffOp, apply, compose, gcrd, lclm, right_divrem
from holonomy.operators.intertwiners import verify_intertwiner
from holonomy.operators.sympower import image_operator, sym_power
from holonomy.rings.fields import format_rational
from holonomy.rings.series import Series
from holonomy.suites import data
from holonomy.suites.schemas import SuiteCell, SuiteReport
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.suites.structure")


def doll_operators(N: int) -> Dict[str, DiffOp]:
    """F_0 = L_1, F_1 = L_2, F_2 = L_3 L_1, F_3 = L_4 L_2 at fixed N."""
    L = {j: op.specialize(N) for j, op in data.lattice_family().items()}
    return {
        "L1": L[1],
        "L2": L[2],
        "L3*L1": compose(L[3], L[1]),
        "L4*L2": compose(L[4], L[2]),
    }


# particle index -> operators expected to annihilate f^(j)
DOLL_TABLE: Dict[int, Tuple[str, ...]] = {
    0: ("L1", "L3*L1"),
    1: ("L2", "L4*L2"),
    2: ("L3*L1",),
    3: ("L4*L2",),
}


def _formfactor(j: int, N: int, order: int) -> Series:
    branch = Branch.BELOW if j % 2 == 0 else Branch.ABOVE
    return formfactor(FormFactorRequest(branch=branch, j=j, N=N, order=order))


def annihilation_witness(op: DiffOp, s: Series) -> Dict[str, object]:
    """Whether op kills s to the available precision, with the first surviving exponent."""
    image = apply(op, s)
    lead = image.leading_exponent()
    return {
        "annihilated": lead is None,
        "first_nonzero": None if lead is None else format_rational(lead),
        "precision": format_rational(image.precision),
    }


def russian_doll_report(Ns: Iterable[int] = (0, 1, 2), order: int = 60, max_j: int = 3) -> SuiteReport:
    """
    Check each telescoped operator against the form factors it should annihilate.

    Cells are ordered by (N, j, operator); the operators are applied to the
    ramified odd form factors directly.
    """
    cells = []
    with timed_event("russian-doll suite", {"order": order}):
        for N in Ns:
            ops = doll_operators(N)
            for j in range(max_j + 1):
                f = _formfactor(j, N, order)
                for name in DOLL_TABLE.get(j, ()):
                    w = annihilation_witness(ops[name], f)
                    cells.append(SuiteCell.of(w["annihilated"], {"N": N, "j": j, "operator": name, "order": order}, **w))
    return SuiteReport(suite="russian-doll", cells=cells)


def direct_sum_report(F: DiffOp, summands: Sequence[DiffOp], label: str = "F") -> SuiteReport:
    """
    F = S_1 + ... + S_k as a direct sum: every S_i right-divides F, pairwise GCRDs
    are trivial, the orders add up and lclm(S_1, ..., S_k) = F up to a left unit.
    """
    cells = []
    params = {"operator": label, "summands": len(summands)}
    for i, S in enumerate(summands):
        rem = right_divrem(F, S).remainder
        cells.append(SuiteCell.of(rem.is_zero(), {**params, "check": "right-divides", "summand": i}, order=S.order))
    for i, j in combinations(range(len(summands)), 2):
        g = gcrd(summands[i], summands[j])
        cells.append(SuiteCell.of(g.order == 0, {**params, "check": "gcrd", "pair": [i, j]}, gcrd_order=g.order))
    total = sum(S.order for S in summands)
    cells.append(SuiteCell.of(total == F.order, {**params, "check": "orders"}, sum=total, order=F.order))
    multiple = reduce(lclm, summands) if summands else F
    same = multiple.normalized() == F.normalized()
    cells.append(SuiteCell.of(same, {**params, "check": "lclm"}, lclm_order=multiple.order))
    return SuiteReport(suite="direct-sum", cells=cells)


def M4(N: int) -> DiffOp:
    """The order-four summand of F_3(N): image of Sym^3(L_2(N)) under the printed Q(N)."""
    cube = sym_power(data.L2().specialize(N), 3)
    return image_operator(cube, data.Q(N))


def doll_direct_sum(N: int = 0) -> SuiteReport:
    """F_3(N) = L_4(N) L_2(N) against its summands M_4(N) and L_2(N)."""
    with timed_event("direct-sum suite", {"N": N}):
        L2 = data.L2().specialize(N)
        F = compose(data.L4().specialize(N), L2)
        return direct_sum_report(F, [M4(N), L2], label=f"F3({N})")


def intertwiner_report() -> SuiteReport:
    """The printed equivalences L_3 U = V Sym^2(L_2) and L_4 A = B Sym^3(L_2), nu symbolic."""
    L2 = data.L2()
    sym2 = sym_power(L2, 2)
    sym3 = sym_power(L2, 3)
    cells = [
        SuiteCell.of(sym2 == data.sym2_L2().normalized(), {"check": "sym2 printed"}),
        SuiteCell.of(
            verify_intertwiner(data.L3(), sym2.monic(), data.U3(), data.V3()), {"check": "L3 U = V Sym2(L2)"}
        ),
        SuiteCell.of(
            verify_intertwiner(data.L4(), sym3.monic(), data.A4(), data.B4()), {"check": "L4 A = B Sym3(L2)"}
        ),
    ]
    return SuiteReport(suite="intertwiners", cells=cells)
