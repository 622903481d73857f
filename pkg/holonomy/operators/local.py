"""
'holonomy/operators/local.py': Singular points, indicial equations and Frobenius solutions.

A point is a rational number, "infinity", or a polynomial factor of the head
(all its roots are conjugate, so one local computation in Q[t]/(f) covers them).
"""
import logging
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ

from holonomy.exceptions import DomainMismatchError
from holonomy.operators.diffop import DiffOp, compose
from holonomy.operators.schemas import (
    ApparentCheck,
    FactorSource,
    FrobeniusBasis,
    HeadFactor,
    IndicialData,
    Obstruction,
    SingularPointReport,
)
from holonomy.rings.fields import format_rational, parse_rational
from holonomy.rings.poly import integer_primitive, irreducible_factors, poly_coeffs, poly_from_coeffs, squarefree_factors
from holonomy.rings.series import Series

logger = logging.getLogger("holonomy.operators.local")

INFINITY = "infinity"
OBSTRUCTION_BUFFER = 10
FACTOR_DEGREE_LIMIT = 60


# -- singular points ---------------------------------------------------------------------------
def _trial_divide(p, factor) -> Tuple[object, int]:
    count = 0
    while p.degree() >= factor.degree():
        q, r = p.div(factor)
        if r:
            break
        p, count = q, count + 1
    return p, count


def singular_points(L: DiffOp, catalog: Optional[Sequence[Tuple[str, Sequence]]] = None) -> SingularPointReport:
    """
    Factor the head polynomial: powers of the variable, catalog polynomials by trial
    division, then rational and quadratic factors; what is left is reported as residual.

    Args:
        L: Operator over Q(var).
        catalog: (name, dense integer coefficients) pairs; defaults to the modular catalog.
    """
    if L.parameter is not None:
        raise DomainMismatchError("[singular_points] specialize the parameter first")
    if catalog is None:
        from holonomy.modular.catalog import load_catalog

        catalog = load_catalog().polynomials(L.variable)
    head = L.head_polynomial()
    R = head.ring
    report = SingularPointReport(variable=L.variable, head=[format_rational(c) for c in poly_coeffs(head)])
    residual = head
    x = R.gens[0]
    residual, k = _trial_divide(residual, x)
    if k:
        report.factors.append(HeadFactor(polynomial=["0", "1"], multiplicity=k, source=FactorSource.MONOMIAL))
    for name, coeffs in catalog:
        factor = poly_from_coeffs(coeffs, R)
        if factor.degree() < 1:
            continue
        residual, k = _trial_divide(residual, factor)
        if k:
            report.factors.append(
                HeadFactor(
                    polynomial=[format_rational(c) for c in coeffs],
                    multiplicity=k,
                    source=FactorSource.CATALOG,
                    name=name,
                )
            )
    if residual.degree() > 0:
        if residual.degree() <= FACTOR_DEGREE_LIMIT:
            pieces = irreducible_factors(residual)
        else:
            pieces = [(integer_primitive([f])[0][0], k) for f, k in squarefree_factors(residual)]
        for f, k in pieces:
            deg = f.degree()
            if residual.degree() > FACTOR_DEGREE_LIMIT:
                source = FactorSource.RESIDUAL
            elif deg == 1:
                source = FactorSource.RATIONAL
            elif deg == 2:
                source = FactorSource.QUADRATIC
            else:
                source = FactorSource.IRREDUCIBLE
            residual, _ = _trial_divide(residual, f)
            report.factors.append(
                HeadFactor(polynomial=[format_rational(c) for c in poly_coeffs(f)], multiplicity=k, source=source)
            )
    content = residual.LC if residual.degree() == 0 else QQ(1)
    report.content = format_rational(content)
    logger.info(f"[singular_points] {len(report.factors)} factors of a degree {head.degree()} head")
    return report


# -- local coordinates ------------------------------------------------------------------------------
def at_infinity(L: DiffOp) -> DiffOp:
    """The operator rewritten in z = 1/var (same variable name), D_var = -z^2 D_z."""
    K = L.field
    z = sympy.Symbol(L.variable)
    d_inf = L._new([K.zero, -K.gens[0] ** 2])
    total = L._new([])
    power = L._new([K.one])
    for i, c in enumerate(L.coefficients):
        if i:
            power = compose(d_inf, power)
        if c:
            coeff = K.from_expr(sympy.together(c.as_expr().subs(z, 1 / z)))
            total = total + compose(L._new([coeff]), power)
    return total


class _LocalData:
    """Taylor table of an operator at a root of the modulus f, entries in Q[t]/(f)."""

    def __init__(self, L: DiffOp, point):
        if L.parameter is not None:
            raise DomainMismatchError("[local] specialize the parameter first")
        self.symbol = sympy.Symbol(L.variable)
        t = self.symbol
        self.label, op, modulus = self._resolve(L, point)
        self.modulus = modulus
        self.order = op.order
        polys = [sympy.Poly(c.numer.as_expr(), t, domain="QQ") for c in op.primitive().coefficients]
        self.table: List[List[sympy.Poly]] = []
        for p in polys:
            row, current = [], p
            for k in range(p.degree() + 1 if not p.is_zero else 0):
                row.append(current.rem(modulus) * sympy.Rational(1, factorial(k)))
                current = current.diff(t)
            self.table.append(row)
        vals = [self._valuation(row) for row in self.table]
        self.valuations = vals
        self.h = min(v - i for i, v in enumerate(vals) if v is not None)
        self.regular = vals[-1] - self.order == self.h

    def _resolve(self, L: DiffOp, point):
        t = self.symbol
        if isinstance(point, str) and point.strip().lower() in (INFINITY, "oo", "inf"):
            return INFINITY, at_infinity(L), sympy.Poly(t, t, domain="QQ")
        if hasattr(point, "ring"):
            return str(point.as_expr()), L, sympy.Poly(point.as_expr(), t, domain="QQ")
        if isinstance(point, (list, tuple)):
            expr = sum(sympy.Rational(str(parse_rational(c))) * t ** i for i, c in enumerate(point))
            return str(expr), L, sympy.Poly(expr, t, domain="QQ")
        a = parse_rational(point)
        return format_rational(a), L, sympy.Poly(t - sympy.Rational(str(a)), t, domain="QQ")

    @staticmethod
    def _valuation(row) -> Optional[int]:
        for k, c in enumerate(row):
            if not c.is_zero:
                return k
        return None

    @property
    def rational_point(self) -> bool:
        return self.modulus.degree() == 1

    def entry(self, i: int, k: int):
        row = self.table[i]
        return row[k] if 0 <= k < len(row) else sympy.Poly(0, self.symbol, domain="QQ")

    def reduce(self, value):
        return value.rem(self.modulus)

    def evaluate(self, s: int, x) -> sympy.Poly:
        """P_s(x) = sum_i T[i][i + h + s] * x(x-1)...(x-i+1)."""
        total = sympy.Poly(0, self.symbol, domain="QQ")
        ff = sympy.Integer(1)
        x = sympy.Rational(str(x))
        for i in range(self.order + 1):
            if i:
                ff *= x - (i - 1)
            c = self.entry(i, i + self.h + s)
            if not c.is_zero and ff:
                total = total + c * ff
        return self.reduce(total)

    def indicial_coefficients(self) -> List[sympy.Poly]:
        rho = sympy.Symbol("rho")
        total = 0
        for i in range(self.order + 1):
            c = self.entry(i, i + self.h)
            if not c.is_zero:
                total += c.as_expr() * sympy.ff(rho, i)
        poly = sympy.Poly(sympy.expand(sympy.expand_func(total)), rho)
        return [sympy.Poly(c, self.symbol, domain="QQ") for c in reversed(poly.all_coeffs())]


def _as_rational(value: sympy.Poly):
    if value.is_zero:
        return QQ(0)
    if value.degree() > 0:
        return None
    return QQ.from_sympy(value.as_expr())


def indicial(L: DiffOp, point) -> IndicialData:
    """
    Indicial polynomial and exponents at a point (Fuchs substitution var - a = z).

    Irregular points are reported through `regular=False`; the polynomial then
    comes from the dominant terms only.
    """
    data = _LocalData(L, point)
    return _indicial(data)


def _indicial(data: _LocalData) -> IndicialData:
    coeffs = data.indicial_coefficients()
    while coeffs and data.reduce(coeffs[-1]).is_zero:
        coeffs.pop()
    lead = data.reduce(coeffs[-1])
    inv = lead.invert(data.modulus) if data.modulus.degree() > 0 else lead
    normalized = [data.reduce(c * inv) for c in coeffs]
    values = [_as_rational(c) for c in normalized]
    if any(v is None for v in values):
        logger.info(f"[indicial] exponents at {data.label} are not rational")
        return IndicialData(None, [], [str(sum(c.as_expr() * sympy.Symbol("rho") ** j for j, c in enumerate(normalized)))], data.regular)
    rho = sympy.Symbol("rho")
    poly = sympy.Poly(sum(sympy.Rational(str(v)) * rho ** j for j, v in enumerate(values)), rho, domain="QQ")
    exponents, residual = [], []
    _, factors = poly.factor_list()
    for f, k in factors:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            exponents.extend([QQ.from_sympy(-b / a)] * k)
        elif f.degree() > 1:
            residual.extend([str(f.as_expr())] * k)
    return IndicialData(poly, sorted(exponents), residual, data.regular)


# -- Frobenius solutions --------------------------------------------------------------------------------
def _recurrence(data: _LocalData, rho, terms: int) -> Tuple[List, Optional[Tuple[int, sympy.Poly]]]:
    """Coefficients c_0..c_terms of z^rho sum c_n z^n; stops at the first nonzero obstruction."""
    one = sympy.Poly(1, data.symbol, domain="QQ")
    coeffs = [one]
    for n in range(1, terms + 1):
        rhs = sympy.Poly(0, data.symbol, domain="QQ")
        for s in range(1, n + 1):
            c = coeffs[n - s]
            if c.is_zero:
                continue
            p = data.evaluate(s, rho + n - s)
            if not p.is_zero:
                rhs = rhs - p * c
        rhs = data.reduce(rhs)
        d = data.evaluate(0, rho + n)
        if d.is_zero:
            if not rhs.is_zero:
                return coeffs, (n, rhs)
            coeffs.append(sympy.Poly(0, data.symbol, domain="QQ"))
            continue
        inv = d.invert(data.modulus) if data.modulus.degree() > 0 else sympy.Poly(1 / d.as_expr(), data.symbol, domain="QQ")
        coeffs.append(data.reduce(rhs * inv))
    return coeffs, None


def frobenius(L: DiffOp, point, order: int) -> FrobeniusBasis:
    """
    Log-free local solutions z^rho * sum c_n z^n for each rational exponent, with the
    obstruction constants at integer resonances.

    Raises:
        DomainMismatchError: If the point is irregular singular.
    """
    data = _LocalData(L, point)
    if not data.regular:
        raise DomainMismatchError(f"[frobenius] irregular singular point at {data.label}")
    ind = _indicial(data)
    basis = FrobeniusBasis(
        point=data.label,
        exponents=[format_rational(e) for e in ind.exponents],
        order=data.order,
        unresolved=data.order - len(ind.exponents),
    )
    distinct = sorted(set(ind.exponents))
    for rho in distinct:
        multiplicity = ind.exponents.count(rho)
        for _ in range(multiplicity - 1):
            basis.obstructed.append(Obstruction(exponent=format_rational(rho), step=0, value="repeated"))
        coeffs, obstruction = _recurrence(data, rho, order)
        key = format_rational(rho)
        if obstruction is not None:
            n, value = obstruction
            basis.obstructed.append(Obstruction(exponent=key, step=n, value=str(value.as_expr())))
            continue
        if data.rational_point:
            values = [_as_rational(c) for c in coeffs]
            basis.solutions[key] = Series(values, L.variable, shift=rho)
        else:
            basis.solutions[key] = [str(c.as_expr()) for c in coeffs]
    return basis


def check_apparent(L: DiffOp, point) -> ApparentCheck:
    """
    A point is apparent when it is regular, its exponents are distinct nonnegative
    integers, and no resonance carries a logarithm.
    """
    data = _LocalData(L, point)
    if not data.regular:
        return ApparentCheck(False, "irregular singular point")
    ind = _indicial(data)
    if ind.residual or len(ind.exponents) != data.order:
        return ApparentCheck(False, "exponents are not all rational")
    exps = ind.exponents
    if len(set(exps)) != len(exps):
        return ApparentCheck(False, "repeated exponent (logarithmic solution)")
    if any(e.denominator != 1 or e < 0 for e in exps):
        return ApparentCheck(False, "exponents are not nonnegative integers")
    top = max(exps)
    for rho in exps:
        steps = int(top - rho) + OBSTRUCTION_BUFFER
        _, obstruction = _recurrence(data, rho, steps)
        if obstruction is not None:
            return ApparentCheck(False, f"logarithmic obstruction at exponent {rho} + {obstruction[0]}")
    return ApparentCheck(True, "")


def is_apparent(L: DiffOp, point) -> bool:
    return check_apparent(L, point).apparent


def singularity_exponents(L: DiffOp, report: SingularPointReport) -> Dict[str, IndicialData]:
    """Indicial data at every head factor and at infinity."""
    out: Dict[str, IndicialData] = {}
    R = L.head_polynomial().ring
    for factor in report.factors:
        poly = poly_from_coeffs([parse_rational(c) for c in factor.polynomial], R)
        out[str(poly.as_expr())] = indicial(L, poly)
    out[INFINITY] = indicial(L, INFINITY)
    return out
