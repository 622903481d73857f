"""
'holonomy/operators/diffop.py': Linear differential operators over Q(t) and Q(t, nu).

An operator is a list of rational-function coefficients, index i holding the
coefficient of D^i, with D = d/dt. ParamDiffOp carries the parameter nu = N^2.
"""
import logging
from collections import namedtuple
from math import comb
from typing import Iterable, List, Optional, Sequence

import sympy
from sympy.polys.domains import QQ

from holonomy.exceptions import DomainMismatchError
from holonomy.rings.fields import characteristic, to_domain
from holonomy.rings.poly import (
    clear_denominators,
    integer_primitive,
    operator_field,
    poly_coeffs,
    poly_from_json,
    poly_to_json,
    univariate_field_poly,
)
from holonomy.rings.series import Series

logger = logging.getLogger("holonomy.operators.diffop")

OPERATOR_FORMAT = 1

DivRem = namedtuple("DivRem", ["quotient", "remainder"])


class DiffOp:
    """Ore polynomial sum_i a_i(t) D^i with a_i in a rational function field."""

    __slots__ = ("coefficients", "field", "variable", "parameter")

    def __init__(
        self,
        coefficients: Iterable,
        variable: str = "t",
        parameter: Optional[str] = None,
        domain=QQ,
        field=None,
    ):
        K = field if field is not None else operator_field(variable, parameter, domain)
        coeffs = [c if getattr(c, "field", None) == K else K(c) for c in coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coefficients = tuple(coeffs)
        self.field = K
        self.variable = variable
        self.parameter = parameter

    # -- construction ---------------------------------------------------------------------
    def _new(self, coefficients: Sequence) -> "DiffOp":
        cls = type(self)
        out = object.__new__(cls)
        coeffs = list(coefficients)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        out.coefficients = tuple(coeffs)
        out.field = self.field
        out.variable = self.variable
        out.parameter = self.parameter
        return out

    @classmethod
    def from_dense(cls, polys: Sequence[Sequence], variable: str = "t", domain=QQ) -> "DiffOp":
        """Operator from dense polynomial coefficient lists, one per derivative order."""
        K = operator_field(variable, None, domain)
        return cls([univariate_field_poly(p, K) for p in polys], variable, domain=domain, field=K)

    @classmethod
    def from_strings(cls, coefficients: Sequence[str], variable: str = "t", parameter: Optional[str] = None) -> "DiffOp":
        """Operator from sympy-parsable coefficient expressions in the variable (and N or nu)."""
        K = operator_field(variable, parameter)
        symbols = {variable: sympy.Symbol(variable)}
        N = sympy.Symbol("N")
        nu = sympy.Symbol(parameter) if parameter else None
        if parameter:
            symbols[parameter] = nu
            symbols["N"] = N
        coeffs = []
        for text in coefficients:
            expr = sympy.sympify(text, locals=symbols)
            if parameter and expr.has(N):
                if sympy.simplify(expr - expr.subs(N, -N)) != 0:
                    raise DomainMismatchError(f"[DiffOp.from_strings] coefficient {text} is odd in N")
                expr = sympy.expand(expr).subs(N ** 2, nu)
                if expr.has(N):
                    raise DomainMismatchError(f"[DiffOp.from_strings] coefficient {text} is not a function of N^2")
            coeffs.append(K.from_expr(expr))
        return cls(coeffs, variable, parameter, field=K)

    @classmethod
    def D(cls, variable: str = "t", parameter: Optional[str] = None) -> "DiffOp":
        return cls([0, 1], variable, parameter)

    def constant_op(self, value) -> "DiffOp":
        """The order-0 operator 'multiply by value' in this operator's field."""
        return self._new([self.field(value) if getattr(value, "field", None) != self.field else value])

    # -- properties -----------------------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def domain(self):
        return self.field.domain

    @property
    def prime(self) -> Optional[int]:
        return characteristic(self.field.domain)

    @property
    def gen(self):
        return self.field.gens[0]

    @property
    def head(self):
        return self.coefficients[-1] if self.coefficients else self.field.zero

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, i: int):
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else self.field.zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self.field != other.field:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for i in range(self.order, -1, -1):
            c = self.coefficients[i]
            if not c:
                continue
            head = f"({c.as_expr()})"
            parts.append(head if i == 0 else f"{head}*D^{i}" if i > 1 else f"{head}*D")
        return " + ".join(parts)

    def _check(self, other: "DiffOp") -> None:
        if self.field != other.field:
            raise DomainMismatchError(
                f"[DiffOp] operators live over different fields: {self.field} vs {other.field}"
            )

    # -- ring operations ---------------------------------------------------------------------
    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return self._new([self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return self._new([self[i] - other[i] for i in range(n)])

    def __neg__(self) -> "DiffOp":
        return self._new([-c for c in self.coefficients])

    def scale(self, factor) -> "DiffOp":
        """Left multiplication by a rational function."""
        factor = factor if getattr(factor, "field", None) == self.field else self.field(factor)
        return self._new([factor * c for c in self.coefficients])

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        return self.scale(other)

    def derivative_table(self, count: int) -> List[List]:
        """table[k][j] = k-th t-derivative of the coefficient of D^j."""
        x = self.gen
        table = [list(self.coefficients)]
        for _ in range(count):
            table.append([c.diff(x) if c else c for c in table[-1]])
        return table

    # -- normal forms ----------------------------------------------------------------------------
    def monic(self) -> "DiffOp":
        return self.scale(self.field.one / self.head)

    def cleared(self) -> List:
        """Polynomial coefficients (in the field's ring) after clearing a common denominator."""
        if not self.coefficients:
            return []
        numerators, _ = clear_denominators(list(self.coefficients))
        return numerators

    def primitive(self) -> "DiffOp":
        """Denominators cleared, integer content removed, head leading coefficient positive."""
        if not self.coefficients:
            return self
        polys = self.cleared()
        if self.prime is not None:
            lc = polys[-1].LC
            polys = [p * (self.domain.one / lc) for p in polys]
        else:
            polys, _ = integer_primitive(polys)
        return self._new([self.field(p) for p in polys])

    def normalized(self) -> "DiffOp":
        """Canonical representative of the left-associate class: monic, then primitive."""
        if not self.coefficients:
            return self
        return self.monic().primitive()

    def polynomial_coefficients(self) -> List[List]:
        """Dense coefficient lists of the primitive form (main variable only)."""
        if self.parameter is not None:
            raise DomainMismatchError("[DiffOp.polynomial_coefficients] specialize the parameter first")
        return [poly_coeffs(p.numer) for p in self.primitive().coefficients]

    def head_polynomial(self):
        """Head of the primitive polynomial form."""
        return self.primitive().head.numer

    # -- serialization ------------------------------------------------------------------------------
    def to_dict(self) -> dict:
        """Operator JSON of the primitive form."""
        op = self.primitive()
        return {
            "format": OPERATOR_FORMAT,
            "variable": self.variable,
            "parameter": self.parameter,
            "prime": self.prime,
            "order": op.order,
            "coefficients": [poly_to_json(c.numer) for c in op.coefficients],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DiffOp":
        from holonomy.rings.fields import field_of

        variable = data.get("variable", "t")
        parameter = data.get("parameter")
        K = operator_field(variable, parameter, field_of(data.get("prime")))
        coeffs = [K(poly_from_json(c, K.ring)) for c in data["coefficients"]]
        op_cls = ParamDiffOp if parameter else cls
        out = op_cls(coeffs, variable, parameter, field=K)
        if out.order != int(data.get("order", out.order)):
            raise DomainMismatchError("[DiffOp.from_dict] order does not match the coefficient list")
        return out

    def reduce(self, prime: int) -> "DiffOp":
        """Image of a rational operator modulo p (denominators must be invertible)."""
        from holonomy.rings.fields import prime_field

        dom = prime_field(prime)
        K = operator_field(self.variable, self.parameter, dom)
        polys = self.cleared()
        coeffs = []
        for p in polys:
            terms = {m: to_domain(c, dom) for m, c in p.terms()}
            coeffs.append(K(K.ring.from_dict({m: c for m, c in terms.items() if c})))
        return type(self)(coeffs, self.variable, self.parameter, field=K)


class ParamDiffOp(DiffOp):
    """Operator whose coefficients are rational in t and polynomial in nu = N^2."""

    def __init__(self, coefficients: Iterable, variable: str = "t", parameter: str = "nu", domain=QQ, field=None):
        super().__init__(coefficients, variable, parameter or "nu", domain, field)

    @classmethod
    def from_strings(cls, coefficients: Sequence[str], variable: str = "t", parameter: str = "nu") -> "ParamDiffOp":
        return super().from_strings(coefficients, variable, parameter)

    def specialize(self, N: int) -> DiffOp:
        """Substitute nu = N^2."""
        K = operator_field(self.variable, None, self.domain)
        value = self.domain.convert(N * N)
        coeffs = []
        for c in self.coefficients:
            expr = c.as_expr().subs(sympy.Symbol(self.parameter), value)
            coeffs.append(K.from_expr(sympy.together(expr)) if expr != 0 else K.zero)
        return DiffOp(coeffs, self.variable, field=K)


def _same_kind(L: DiffOp, M: DiffOp) -> None:
    if L.variable != M.variable:
        raise DomainMismatchError(f"[DiffOp] variables differ: {L.variable} vs {M.variable}")
    L._check(M)


def compose(L: DiffOp, M: DiffOp) -> DiffOp:
    """
    L o M by the Leibniz rule: a D^i o b D^j = a sum_k C(i,k) b^(k) D^(i+j-k).
    """
    _same_kind(L, M)
    if L.is_zero() or M.is_zero():
        return L._new([])
    table = M.derivative_table(L.order)
    out = [L.field.zero] * (L.order + M.order + 1)
    for i, a in enumerate(L.coefficients):
        if not a:
            continue
        for k in range(i + 1):
            binom = comb(i, k)
            for j, b in enumerate(table[k]):
                if b:
                    out[i + j - k] += a * binom * b
    return L._new(out)


def right_divrem(L: DiffOp, M: DiffOp) -> DivRem:
    """
    Right Euclidean division L = Q o M + R with ord R < ord M.

    Raises:
        DomainMismatchError: If the operators live over different fields or M is zero.
    """
    _same_kind(L, M)
    if M.is_zero():
        raise DomainMismatchError("[right_divrem] division by the zero operator")
    R = L
    Q = [L.field.zero] * max(L.order - M.order + 1, 1)
    lead = M.head
    while not R.is_zero() and R.order >= M.order:
        s = R.order - M.order
        c = R.head / lead
        Q[s] += c
        term = L._new([L.field.zero] * s + [c])
        R = R - compose(term, M)
    quotient = L._new(Q)
    if compose(quotient, M) + R != L:
        raise DomainMismatchError("[right_divrem] reconstruction identity failed")
    return DivRem(quotient, R)


def gcrd(L: DiffOp, M: DiffOp) -> DiffOp:
    """Greatest common right divisor by the right Euclidean scheme, normalized."""
    _same_kind(L, M)
    a, b = L, M
    if a.order < b.order:
        a, b = b, a
    while not b.is_zero():
        a, b = b, right_divrem(a, b).remainder
    return a.normalized()


def _field_nullspace(rows: List[List], K) -> List[List]:
    """Right nullspace over a rational function field (small systems)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = K.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [K.zero] * n
        v[f] = K.one
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def remainder_vector(power: int, M: DiffOp) -> List:
    """Coefficients of D^power reduced modulo M on the right."""
    Dp = M._new([M.field.zero] * power + [M.field.one])
    R = right_divrem(Dp, M).remainder
    return [R[i] for i in range(M.order)]


def lclm(L: DiffOp, M: DiffOp) -> DiffOp:
    """
    Least common left multiple: the first linear relation among the pairs
    (D^k mod L, D^k mod M), k = 0..ord L + ord M, normalized.
    """
    _same_kind(L, M)
    K = L.field
    top = L.order + M.order
    columns = [remainder_vector(k, L) + remainder_vector(k, M) for k in range(top + 1)]
    for k in range(max(L.order, M.order), top + 1):
        rows = [[columns[c][r] for c in range(k + 1)] for r in range(L.order + M.order)]
        basis = _field_nullspace(rows, K)
        if basis:
            vec = basis[0]
            return L._new(vec).normalized()
    raise DomainMismatchError("[lclm] no relation found up to the combined order")


def apply(L: DiffOp, s: Series) -> Series:
    """
    sum_i p_i(var) s^(i) for the primitive polynomial form of L.

    Raises:
        DomainMismatchError: On variable mismatch or an unspecialized parameter.
    """
    if L.variable != s.variable:
        raise DomainMismatchError(f"[apply] operator in {L.variable}, series in {s.variable}")
    if L.parameter is not None:
        raise DomainMismatchError("[apply] specialize the parameter before applying")
    if L.is_zero():
        return s.scale(0)
    polys = [poly_coeffs(c.numer) for c in L.primitive().coefficients]
    total = None
    deriv = s
    for i, p in enumerate(polys):
        if i:
            deriv = deriv.derivative()
        if not p:
            continue
        poly = Series.from_polynomial(p, deriv.order, s.variable, domain=s.domain)
        if s.ramification > 1:
            poly = poly.ramify(s.ramification).truncate(deriv.order)
        term = poly * deriv
        total = term if total is None else total + term
    return total if total is not None else s.scale(0)


def annihilates(L: DiffOp, s: Series) -> bool:
    """True when apply(L, s) vanishes to its available precision."""
    return apply(L, s).is_zero()
