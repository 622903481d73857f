"""
'holonomy/rings/poly.py': Polynomial and rational-function helpers on top of sympy rings.

Poly is a sympy PolyElement; RatFunc is a sympy FracElement of
`operator_field(variable, parameter)`. Dense coefficient lists are lowest degree first.
"""
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.fields import field
from sympy.polys.rings import ring

from holonomy.exceptions import DomainMismatchError
from holonomy.rings.fields import format_rational, parse_rational, to_domain


@lru_cache(maxsize=None)
def operator_field(variable: str = "t", parameter: Optional[str] = None, domain=QQ):
    """Fraction field Q(variable[, parameter]) used for operator coefficients."""
    names = variable if parameter is None else f"{variable},{parameter}"
    return field(names, domain)[0]


@lru_cache(maxsize=None)
def poly_ring(variable: str = "t", domain=QQ):
    return ring(variable, domain)[0]


def poly_from_coeffs(coefficients: Sequence, R):
    """Univariate polynomial of R from a dense list."""
    dom = R.domain
    return R.from_dict({(i,): to_domain(c, dom) for i, c in enumerate(coefficients) if c})


def poly_coeffs(p) -> List:
    """Dense coefficient list of a univariate polynomial (empty for zero)."""
    if not p:
        return []
    deg = p.degree()
    out = [p.ring.domain.zero] * (deg + 1)
    for (i,), c in p.terms():
        out[i] = c
    return out


def univariate_field_poly(coefficients: Sequence, K, gen_index: int = 0):
    """Embed a dense polynomial in the main variable of K."""
    x = K.gens[gen_index]
    out = K.zero
    power = K.one
    for c in coefficients:
        if c:
            out += power * to_domain(c, K.domain)
        power = power * x
    return out


def clear_denominators(elements: Sequence) -> Tuple[List, object]:
    """
    Multiply rational functions by a common denominator.

    Returns:
        The list of numerator polynomials (in K.ring) and the common denominator.
    """
    K = elements[0].field
    den = reduce(lambda a, b: a.lcm(b), [e.denom for e in elements if e], K.ring.one)
    return [(e.numer * (den.exquo(e.denom))) if e else K.ring.zero for e in elements], den


def integer_primitive(polys: Sequence) -> Tuple[List, object]:
    """
    Scale rational polynomials to integer coefficients with unit content.

    Sign convention: the last nonzero polynomial's leading coefficient is positive.

    Returns:
        (scaled polynomials, applied scale factor in QQ)
    """
    coeffs = [c for p in polys for c in p.coeffs()] if polys else []
    if not coeffs:
        return list(polys), QQ(1)
    den = 1
    for c in coeffs:
        den = lcm(den, int(c.denominator))
    num = 0
    for c in coeffs:
        num = gcd(num, int(c.numerator) * (den // int(c.denominator)))
    scale = QQ(den, num)
    head = next(p for p in reversed(polys) if p)
    if head.LC * scale < 0:
        scale = -scale
    return [p * scale for p in polys], scale


def poly_to_json(p) -> List:
    """Little-endian 'num/den' list; bivariate (main, parameter) polynomials become nested lists."""
    if not p:
        return []
    if p.ring.ngens == 1:
        return [format_rational(c) for c in poly_coeffs(p)]
    deg = p.degree(0)
    out: List[Dict[int, str]] = [dict() for _ in range(deg + 1)]
    for (i, j), c in p.terms():
        out[i][j] = c
    rows = []
    for row in out:
        if not row:
            rows.append([])
            continue
        width = max(row) + 1
        rows.append([format_rational(row.get(j, QQ(0))) for j in range(width)])
    return rows


def poly_from_json(data: List, R):
    """Inverse of poly_to_json for a ring with one or two generators."""
    if R.ngens == 1:
        return R.from_dict({(i,): parse_rational(c) for i, c in enumerate(data) if parse_rational(c)})
    terms = {}
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise DomainMismatchError("[poly_from_json] expected nested lists for a parameter ring")
        for j, c in enumerate(row):
            value = parse_rational(c)
            if value:
                terms[(i, j)] = value
    return R.from_dict(terms)


def squarefree_factors(p) -> List[Tuple[object, int]]:
    """Squarefree decomposition [(factor, multiplicity)] of a univariate polynomial."""
    _, factors = p.sqf_list()
    return [(f, k) for f, k in factors if f.degree() > 0]


def irreducible_factors(p) -> List[Tuple[object, int]]:
    """Factorization over QQ into irreducibles, primitive with positive leading coefficient."""
    _, factors = p.factor_list()
    out = []
    for f, k in factors:
        if f.degree() <= 0:
            continue
        f = integer_primitive([f])[0][0]
        out.append((f, k))
    return sorted(out, key=lambda fk: (fk[0].degree(), [str(c) for c in poly_coeffs(fk[0])]))


def rational_roots(p) -> List:
    """Rational roots of a univariate polynomial (with repetition removed)."""
    roots = []
    for f, _ in irreducible_factors(p):
        if f.degree() == 1:
            c = poly_coeffs(f)
            roots.append(-c[0] / c[1])
    return sorted(roots)


def shift_poly(p, a):
    """p(var + a)."""
    x = p.ring.gens[0]
    return p.compose(x, x + p.ring.domain.convert(a))


def reverse_poly(p, degree: Optional[int] = None):
    """var^degree * p(1/var)."""
    coeffs = poly_coeffs(p)
    degree = len(coeffs) - 1 if degree is None else degree
    coeffs = coeffs + [p.ring.domain.zero] * (degree + 1 - len(coeffs))
    return poly_from_coeffs(list(reversed(coeffs)), p.ring)
