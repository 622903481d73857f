"""
'holonomy/rings/trig.py': Series in w whose coefficients are cosine polynomials in an angle.

A CosPoly maps a mode k >= 0 to the coefficient of cos(k*phi). Products use
cos a * cos b = (cos(a+b) + cos(a-b)) / 2.
"""
from typing import Dict, Iterable, List, Optional

from sympy.polys.domains import QQ

from holonomy.exceptions import DomainMismatchError, TruncationError
from holonomy.rings.fields import to_domain
from holonomy.rings.series import Series

CosPoly = Dict[int, object]


def _cos_add(a: CosPoly, b: CosPoly, sign: int = 1) -> CosPoly:
    out = dict(a)
    for k, c in b.items():
        c = c if sign == 1 else -c
        v = out[k] + c if k in out else c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _cos_mul(a: CosPoly, b: CosPoly, half, budget: int) -> CosPoly:
    out: CosPoly = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            h = c1 * c2 * half
            for k in (k1 + k2, abs(k1 - k2)):
                if k <= budget:
                    out[k] = out[k] + h if k in out else h
    return {k: c for k, c in out.items() if c}


class TrigSeries:
    """Truncated series in w with cosine-polynomial coefficients."""

    __slots__ = ("terms", "variable", "domain", "budget")

    def __init__(self, terms: Iterable[CosPoly], variable: str = "w", domain=QQ, budget: Optional[int] = None):
        terms = [{int(k): to_domain(c, domain) for k, c in t.items() if c} for t in terms]
        if not terms:
            raise TruncationError("[TrigSeries] needs at least one w-order")
        self.terms = terms
        self.variable = variable
        self.domain = domain
        self.budget = len(terms) - 1 if budget is None else budget
        for t in self.terms:
            for k in [k for k in t if k > self.budget]:
                del t[k]

    def _new(self, terms: List[CosPoly]) -> "TrigSeries":
        out = object.__new__(TrigSeries)
        out.terms = terms
        out.variable = self.variable
        out.domain = self.domain
        out.budget = self.budget
        return out

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @classmethod
    def from_series(cls, series: Series, budget: Optional[int] = None) -> "TrigSeries":
        """Embed an angle-independent series."""
        if series.shift != 0 or series.ramification != 1:
            raise DomainMismatchError("[TrigSeries.from_series] needs a plain power series")
        return cls([{0: c} if c else {} for c in series.coefficients], series.variable, series.domain, budget)

    @classmethod
    def monomial(
        cls, power: int, mode: int, coeff, order: int, variable: str = "w", domain=QQ, budget: Optional[int] = None
    ) -> "TrigSeries":
        """coeff * w^power * cos(mode*phi)."""
        terms: List[CosPoly] = [{} for _ in range(order + 1)]
        if power <= order:
            terms[power] = {mode: to_domain(coeff, domain)}
        return cls(terms, variable, domain, budget)

    def _check(self, other: "TrigSeries") -> None:
        if self.variable != other.variable or self.domain != other.domain:
            raise DomainMismatchError("[TrigSeries] variable or field mismatch")

    def __add__(self, other: "TrigSeries") -> "TrigSeries":
        self._check(other)
        n = min(len(self.terms), len(other.terms))
        return self._new([_cos_add(self.terms[m], other.terms[m]) for m in range(n)])

    def __sub__(self, other: "TrigSeries") -> "TrigSeries":
        self._check(other)
        n = min(len(self.terms), len(other.terms))
        return self._new([_cos_add(self.terms[m], other.terms[m], -1) for m in range(n)])

    def scale(self, factor) -> "TrigSeries":
        factor = to_domain(factor, self.domain)
        return self._new([{k: c * factor for k, c in t.items() if c * factor} for t in self.terms])

    def __mul__(self, other):
        if isinstance(other, TrigSeries):
            return trig_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def constant_term(self) -> CosPoly:
        return self.terms[0]

    def pow_rational(self, exponent) -> "TrigSeries":
        """
        a^e for a whose w^0 coefficient is the constant 1 (Miller recurrence over the cosine ring).
        """
        dom = self.domain
        if self.terms[0] != {0: dom.one}:
            raise DomainMismatchError("[TrigSeries.pow_rational] w^0 coefficient must be 1")
        e = to_domain(QQ.convert(exponent), dom)
        half = dom.one / dom.convert(2)
        a = self.terms
        out: List[CosPoly] = [{0: dom.one}]
        for m in range(1, len(a)):
            acc: CosPoly = {}
            for k in range(1, m + 1):
                if not a[k] or not out[m - k]:
                    continue
                weight = e * dom.convert(k) - dom.convert(m - k)
                if not weight:
                    continue
                prod = _cos_mul(a[k], out[m - k], half, self.budget)
                acc = _cos_add(acc, {mode: c * weight for mode, c in prod.items()})
            inv_m = dom.one / dom.convert(m)
            out.append({mode: c * inv_m for mode, c in acc.items() if c})
        return self._new(out)

    def geometric(self) -> "TrigSeries":
        """1/(1 - a) for a with vanishing w^0 coefficient."""
        if self.terms[0]:
            raise DomainMismatchError("[TrigSeries.geometric] argument must vanish at w = 0")
        dom = self.domain
        total = self._new([{0: dom.one}] + [{} for _ in self.terms[1:]])
        power = total
        for _ in range(1, len(self.terms)):
            power = trig_mul(power, self)
            if not any(power.terms):
                break
            total = total + power
        return total


def trig_mul(a: TrigSeries, b: TrigSeries) -> TrigSeries:
    """Product with the product-to-sum rule; truncation min(Ta, Tb)."""
    a._check(b)
    dom = a.domain
    half = dom.one / dom.convert(2)
    n = min(len(a.terms), len(b.terms))
    budget = min(a.budget, b.budget)
    out: List[CosPoly] = [{} for _ in range(n)]
    for m1 in range(n):
        if not a.terms[m1]:
            continue
        for m2 in range(n - m1):
            if not b.terms[m2]:
                continue
            out[m1 + m2] = _cos_add(out[m1 + m2], _cos_mul(a.terms[m1], b.terms[m2], half, budget))
    res = a._new(out)
    res.budget = budget
    return res


def trig_mode_scale(a: TrigSeries, m: int) -> TrigSeries:
    """Substitute phi -> m*phi (mode k -> m*k); modes beyond the budget are dropped."""
    if m < 1:
        raise DomainMismatchError(f"[trig_mode_scale] scale must be positive, got {m}")
    return a._new([{k * m: c for k, c in t.items() if k * m <= a.budget} for t in a.terms])


def fourier_coeff(a: TrigSeries, k: int) -> Series:
    """Coefficient series of cos(k*phi); mode 0 is the mean value over the circle."""
    dom = a.domain
    return Series([t.get(k, dom.zero) for t in a.terms], a.variable, domain=dom)


def exponential_coeff(a: TrigSeries, k: int) -> Series:
    """Coefficient series of exp(i*k*phi): c_0 for k = 0, c_|k|/2 otherwise."""
    s = fourier_coeff(a, abs(k))
    if k == 0:
        return s
    return s.scale(a.domain.one / a.domain.convert(2))
