"""
'scaling/limit.py': The t = 1 - x/N, N -> infinity limit of N-parametric operators.

With eps = 1/N, t = 1 - x eps, nu = eps^(-2) and D_t = -D_x / eps, the coefficient
of D_x^i is a_i(1 - x eps, eps^(-2)) (-1)^i eps^(-i). Each coefficient is expanded to
its leading power of eps; the limit keeps the terms sharing the most negative power.
"""
import logging
from typing import Dict, Optional, Tuple

import sympy

from holonomy.exceptions import DomainMismatchError
from holonomy.operators.diffop import DiffOp, ParamDiffOp, compose, right_divrem
from holonomy.operators.intertwiners import search_intertwiner, verify_intertwiner
from holonomy.operators.local import INFINITY, indicial
from holonomy.operators.sympower import image_operator, sym_power
from holonomy.scaling.schemas import ScaledFamily
from holonomy.suites import data
from holonomy.suites.schemas import SuiteCell, SuiteReport
from holonomy.suites.structure import direct_sum_report
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.scaling.limit")

_eps = sympy.Symbol("eps")


def _leading(expr, x) -> Optional[Tuple[int, object]]:
    """(v, c(x)) with expr = c(x) eps^v + O(eps^(v+1)), None for zero."""
    expr = sympy.together(expr)
    if expr == 0:
        return None
    numer, denom = sympy.fraction(expr)
    pn = sympy.Poly(sympy.expand(numer), _eps)
    pd = sympy.Poly(sympy.expand(denom), _eps)
    vn = min(m[0] for m in pn.monoms())
    vd = min(m[0] for m in pd.monoms())
    c = sympy.cancel(pn.coeff_monomial(_eps ** vn) / pd.coeff_monomial(_eps ** vd))
    return vn - vd, c


def scale_limit(L: ParamDiffOp, variable: str = "x") -> DiffOp:
    """
    Dominant operator of L under t = 1 - x/N, N -> infinity.

    Returns:
        DiffOp in x, primitive with positive head.

    Raises:
        DomainMismatchError: If L carries no parameter or the limit vanishes.
    """
    if L.parameter is None:
        raise DomainMismatchError("[scale_limit] the operator must depend on nu = N^2")
    t = sympy.Symbol(L.variable)
    nu = sympy.Symbol(L.parameter)
    x = sympy.Symbol(variable)
    leads: Dict[int, Tuple[int, object]] = {}
    for i, c in enumerate(L.coefficients):
        if not c:
            continue
        expr = c.as_expr().subs({t: 1 - x * _eps, nu: _eps ** -2}, simultaneous=True)
        lead = _leading(expr * (-1) ** i * _eps ** -i, x)
        if lead is not None:
            leads[i] = lead
    if not leads:
        raise DomainMismatchError("[scale_limit] every coefficient vanishes")
    top = min(v for v, _ in leads.values())
    coeffs = [sympy.Integer(0)] * (L.order + 1)
    for i, (v, c) in leads.items():
        if v == top:
            coeffs[i] = c
    op = DiffOp.from_strings([str(c) for c in coeffs], variable)
    if op.is_zero():
        raise DomainMismatchError("[scale_limit] the dominant order cancels identically")
    logger.info(f"[scale_limit] order {L.order} -> order {op.order} at N^{-top}")
    return op.primitive()


def scaled_factor(j: int) -> DiffOp:
    """
    L_j^scal recovered from the lattice family.

    The limit is not multiplicative for j = 4: lim L_4 differs from L_4^scal while
    lim (L_4 o L_2) = L_4^scal o L_2^scal, so L_4^scal is the exact left quotient of
    lim (L_4 o L_2) by L_2^scal.

    Raises:
        DomainMismatchError: If the right division leaves a remainder.
    """
    fam = data.lattice_family()
    if j != 4:
        return scale_limit(fam[j])
    split = right_divrem(scale_limit(compose(fam[4], fam[2])), data.scaled(2))
    if not split.remainder.is_zero():
        raise DomainMismatchError("[scaled_factor] L_2^scal is not a right factor of lim (L_4 o L_2)")
    return split.quotient.primitive()


def scaled_family() -> ScaledFamily:
    return ScaledFamily(
        lattice=data.lattice_family(),
        scaled={j: data.scaled(j) for j in range(1, 6)},
        bessel=data.bessel(),
    )


def _same(a: DiffOp, b: DiffOp) -> bool:
    return a.normalized() == b.normalized()


def f2_scaled_operator() -> DiffOp:
    """F_2^scal = L_3^scal o D_x."""
    return compose(data.scaled(3), DiffOp.D("x"))


def f2_summand() -> Tuple[DiffOp, Optional[DiffOp]]:
    """
    (R, U): R annihilates U(solutions of Sym^2(B)) inside the solutions of F_2^scal.

    R is None when no intertwiner is found within the bounds.
    """
    F = f2_scaled_operator()
    sym2 = sym_power(data.bessel(), 2)
    found = search_intertwiner(F, sym2, 2, 8)
    if found is None:
        return None, None
    return image_operator(sym2, found.U), found.U


def scaled_structure_report() -> SuiteReport:
    """
    Limits of the printed lattice operators, the Sym^j(B) equivalences and the
    direct sum D + Sym^2(B) of F_2^scal.
    """
    fam = scaled_family()
    B = fam.bessel
    cells = []
    with timed_event("scaling suite"):
        for j in fam.lattice:
            lim = scaled_factor(j)
            check = "limit" if j != 4 else "quotient of limit of L4 o L2 by L2 scal"
            cells.append(SuiteCell.of(_same(lim, fam.scaled[j]), {"check": check, "j": j}, limit=str(lim)))
        for outer, inner in ((3, 1), (4, 2)):
            lim = scale_limit(compose(fam.lattice[outer], fam.lattice[inner]))
            doll = compose(fam.scaled[outer], fam.scaled[inner])
            cells.append(SuiteCell.of(_same(lim, doll), {"check": "limit of product", "j": [outer, inner]}))
        cells.append(SuiteCell.of(_same(fam.scaled[2], B), {"check": "L2 scal = 4x B"}))

        for j in (1, 2, 3):
            sym = sym_power(B, j)
            found = search_intertwiner(fam.scaled[j + 1], sym, 3, 6)
            ok = found is not None and verify_intertwiner(fam.scaled[j + 1], sym, found.U, found.V)
            witness = {"U": str(found.U)} if found is not None else {}
            cells.append(SuiteCell.of(ok, {"check": "equivalent to Sym^j(B)", "j": j}, **witness))
            if j == 2:
                U, V = data.scaled_witness()
                printed = verify_intertwiner(fam.scaled[3], sym.monic(), U, V)
                recovered = found is not None and _same(found.U, U)
                cells.append(SuiteCell.of(printed and recovered, {"check": "printed witness", "j": 2}, printed=printed, recovered=recovered))

        for j in range(2, 6):
            regular = indicial(fam.scaled[j], INFINITY).regular
            cells.append(SuiteCell.of(not regular, {"check": "irregular at infinity", "j": j}))

    R, _ = f2_summand()
    if R is None:
        cells.append(SuiteCell.of(False, {"check": "F2 scal direct sum"}, reason="no intertwiner from Sym^2(B)"))
    else:
        split = direct_sum_report(f2_scaled_operator(), [DiffOp.D("x"), R], label="F2 scal")
        cells.extend(
            SuiteCell(params={**c.params, "check": f"F2 scal {c.params['check']}"}, status=c.status, witness=c.witness)
            for c in split.cells
        )
    return SuiteReport(suite="scaling", cells=cells)

