"""
'holonomy/rings/series.py': Truncated, possibly ramified power series.

A Series stands for var^shift * sum_k c_k var^(k/r), k = 0..T, known up to
O(var^(shift + (T+1)/r)). Coefficients live in a sympy field domain (QQ or F_p).
"""
from math import lcm
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import mpmath
from sympy.polys.domains import QQ

from holonomy.exceptions import DomainMismatchError, TruncationError
from holonomy.rings.fields import characteristic, field_of, format_rational, parse_rational, to_domain, to_int

SERIES_FORMAT = 1


class Series:
    """Immutable truncated series over an exact field."""

    __slots__ = ("variable", "coefficients", "ramification", "shift", "domain")

    def __init__(
        self,
        coefficients: Iterable,
        variable: str = "t",
        *,
        ramification: int = 1,
        shift=0,
        domain=QQ,
    ):
        coeffs = [to_domain(c, domain) for c in coefficients]
        if not coeffs:
            raise TruncationError("[Series] a series needs at least one coefficient")
        if ramification < 1:
            raise DomainMismatchError(f"[Series] ramification must be positive, got {ramification}")
        self.variable = variable
        self.coefficients = tuple(coeffs)
        self.ramification = int(ramification)
        self.shift = QQ.convert(shift) if not isinstance(shift, QQ.dtype) else shift
        self.domain = domain

    # -- construction helpers -------------------------------------------------
    def _new(self, coefficients: List, *, shift=None, ramification=None) -> "Series":
        out = object.__new__(Series)
        out.variable = self.variable
        out.coefficients = tuple(coefficients)
        out.ramification = self.ramification if ramification is None else ramification
        out.shift = self.shift if shift is None else shift
        out.domain = self.domain
        return out

    @classmethod
    def from_polynomial(cls, coefficients: Sequence, order: int, variable: str = "t", domain=QQ) -> "Series":
        """Embed a polynomial (lowest degree first) as a series to the given order."""
        coeffs = list(coefficients)[: order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        return cls(coeffs, variable, domain=domain)

    @classmethod
    def constant(cls, value, order: int, variable: str = "t", domain=QQ) -> "Series":
        return cls.from_polynomial([value], order, variable, domain)

    @classmethod
    def geometric(cls, ratio, order: int, variable: str = "t", domain=QQ) -> "Series":
        """1/(1 - ratio*var)."""
        ratio = to_domain(ratio, domain)
        coeffs, term = [], domain.one
        for _ in range(order + 1):
            coeffs.append(term)
            term = term * ratio
        return cls(coeffs, variable, domain=domain)

    # -- basic properties ------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def prime(self) -> Optional[int]:
        return characteristic(self.domain)

    @property
    def precision(self):
        """Exponent of the first unknown term."""
        return self.shift + QQ(len(self.coefficients), self.ramification)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, index):
        return self.coefficients[index]

    def __iter__(self):
        return iter(self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.ramification == other.ramification
            and self.shift == other.shift
            and self.domain == other.domain
            and self.coefficients == other.coefficients
        )

    __hash__ = None

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coefficients[:6])
        more = ", ..." if len(self.coefficients) > 6 else ""
        return (
            f"Series({self.variable}^{self.shift} * [{head}{more}] in {self.variable}^(1/{self.ramification}),"
            f" order={self.order}, domain={self.domain})"
        )

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, None for the zero series."""
        for k, c in enumerate(self.coefficients):
            if c:
                return k
        return None

    def leading_exponent(self):
        """Exponent of the first nonzero term."""
        k = self.valuation()
        if k is None:
            return None
        return self.shift + QQ(k, self.ramification)

    def leading_coefficient(self):
        k = self.valuation()
        return None if k is None else self.coefficients[k]

    def coefficient(self, exponent) -> Any:
        """Coefficient of var^exponent (zero when the exponent is not on the grid)."""
        idx = (QQ.convert(exponent) - self.shift) * self.ramification
        if idx.denominator != 1:
            return self.domain.zero
        idx = int(idx.numerator)
        if idx < 0:
            return self.domain.zero
        if idx > self.order:
            raise TruncationError(f"[Series.coefficient] exponent {exponent} beyond precision {self.precision}")
        return self.coefficients[idx]

    # -- reshaping ---------------------------------------------------------------
    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise TruncationError(f"[Series.truncate] requested order {order} above {self.order}")
        return self._new(list(self.coefficients[: order + 1]))

    def ramify(self, factor: int) -> "Series":
        """Same series written in var^(1/(r*factor))."""
        if factor == 1:
            return self
        zero = self.domain.zero
        coeffs: List = []
        for c in self.coefficients[:-1]:
            coeffs.append(c)
            coeffs.extend([zero] * (factor - 1))
        coeffs.append(self.coefficients[-1])
        coeffs.extend([zero] * (factor - 1))
        return self._new(coeffs, ramification=self.ramification * factor)

    def unramify(self) -> "Series":
        """Drop the ramification when every populated exponent sits on a coarser grid."""
        r = self.ramification
        for step in range(r, 1, -1):
            if r % step or len(self.coefficients) < step:
                continue
            if all(not c for k, c in enumerate(self.coefficients) if k % step):
                usable = (len(self.coefficients) // step) * step
                coeffs = list(self.coefficients[:usable:step])
                return self._new(coeffs, ramification=r // step)
        return self

    def strip(self) -> "Series":
        """Move leading zeros into the shift (absolute precision is unchanged)."""
        k = self.valuation()
        if not k:
            return self
        return self._new(list(self.coefficients[k:]), shift=self.shift + QQ(k, self.ramification))

    def mul_power(self, exponent) -> "Series":
        """Multiply by var^exponent."""
        return self._new(list(self.coefficients), shift=self.shift + QQ.convert(exponent))

    def with_shift(self, shift) -> "Series":
        """Re-express with a smaller shift by padding zeros."""
        shift = QQ.convert(shift)
        gap = (self.shift - shift) * self.ramification
        if gap.denominator != 1 or gap < 0:
            raise DomainMismatchError(
                f"[Series.with_shift] cannot move shift {self.shift} to {shift} at ramification {self.ramification}"
            )
        gap = int(gap.numerator)
        return self._new([self.domain.zero] * gap + list(self.coefficients), shift=shift)

    # -- arithmetic ---------------------------------------------------------------
    def _check(self, other: "Series") -> None:
        if self.variable != other.variable:
            raise DomainMismatchError(f"[Series] variables differ: {self.variable} vs {other.variable}")
        if self.domain != other.domain:
            raise DomainMismatchError(f"[Series] fields differ: {self.domain} vs {other.domain}")

    def _align_ramification(self, other: "Series"):
        r = lcm(self.ramification, other.ramification)
        return self.ramify(r // self.ramification), other.ramify(r // other.ramification)

    def _align(self, other: "Series"):
        self._check(other)
        a, b = self._align_ramification(other)
        shift = min(a.shift, b.shift)
        a, b = a.with_shift(shift), b.with_shift(shift)
        n = min(len(a.coefficients), len(b.coefficients))
        return a._new(list(a.coefficients[:n])), b._new(list(b.coefficients[:n]))

    def __add__(self, other):
        if not isinstance(other, Series):
            other = self.constant_like(other)
        a, b = self._align(other)
        return a._new([x + y for x, y in zip(a.coefficients, b.coefficients)])

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return self._new([-c for c in self.coefficients])

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = self.constant_like(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def constant_like(self, value) -> "Series":
        """A constant with the same variable, field and absolute precision."""
        value = to_domain(value, self.domain)
        r = self.ramification
        shift = min(self.shift, QQ(0))
        slots = (self.precision - shift) * r
        index = -shift * r
        if slots.denominator != 1 or index.denominator != 1:
            raise DomainMismatchError("[Series.constant_like] constant term not on the exponent grid")
        coeffs = [self.domain.zero] * int(slots.numerator)
        if int(index.numerator) < len(coeffs):
            coeffs[int(index.numerator)] = value
        return self._new(coeffs, shift=shift)

    def scale(self, factor) -> "Series":
        factor = to_domain(factor, self.domain)
        return self._new([factor * c for c in self.coefficients])

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        a, b = self._align_ramification(other)
        n = min(len(a.coefficients), len(b.coefficients))
        return a._new(_cauchy(a.coefficients, b.coefficients, n, a.domain.zero), shift=a.shift + b.shift)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Series":
        if not isinstance(exponent, int) or exponent < 0:
            return self.pow_rational(exponent)
        base = self
        out = None
        while exponent:
            if exponent & 1:
                out = base if out is None else out * base
            exponent >>= 1
            if exponent:
                base = base * base
        if out is None:
            return self._new([self.domain.one] + [self.domain.zero] * self.order, shift=QQ(0))
        return out

    def inverse(self) -> "Series":
        """Multiplicative inverse; the leading nonzero coefficient must be invertible."""
        s = self.strip()
        c = s.coefficients
        if not c[0]:
            raise ZeroDivisionError("[Series.inverse] zero series")
        inv0 = s.domain.one / c[0]
        out = [inv0]
        for m in range(1, len(c)):
            acc = s.domain.zero
            for k in range(1, m + 1):
                if c[k]:
                    acc += c[k] * out[m - k]
            out.append(-acc * inv0)
        return s._new(out, shift=-s.shift)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return self.scale(self.domain.one / to_domain(other, self.domain))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse().scale(other)

    def derivative(self) -> "Series":
        """d/dvar, chain rule on var^(1/r) included."""
        r = self.ramification
        dom = self.domain
        coeffs = []
        for k, c in enumerate(self.coefficients):
            factor = self.shift + QQ(k, r)
            coeffs.append(to_domain(factor, dom) * c if c else dom.zero)
        return self._new(coeffs, shift=self.shift - 1)

    def integral(self) -> "Series":
        """Antiderivative with zero constant of integration."""
        r = self.ramification
        dom = self.domain
        coeffs = []
        for k, c in enumerate(self.coefficients):
            exponent = self.shift + QQ(k, r) + 1
            if not exponent:
                if c:
                    raise DomainMismatchError("[Series.integral] logarithmic term var^-1 present")
                coeffs.append(dom.zero)
                continue
            coeffs.append(c / to_domain(exponent, dom) if c else dom.zero)
        return self._new(coeffs, shift=self.shift + 1)

    def pow_rational(self, exponent) -> "Series":
        """
        f^e for f with shift 0 and constant term 1 (J.C.P. Miller recurrence).

        Raises:
            DomainMismatchError: If the constant term is not 1.
        """
        s = self
        if s.shift != 0 or s.coefficients[0] != s.domain.one:
            raise DomainMismatchError("[Series.pow_rational] constant term must equal 1")
        dom = s.domain
        e = to_domain(QQ.convert(exponent), dom)
        c = s.coefficients
        out = [dom.one]
        for m in range(1, len(c)):
            acc = dom.zero
            for k in range(1, m + 1):
                if c[k]:
                    acc += (e * k - (m - k)) * c[k] * out[m - k]
            out.append(acc / dom.convert(m))
        return s._new(out)

    def exp(self) -> "Series":
        """exp(f) for f with zero constant term and shift 0."""
        if self.shift != 0 or self.coefficients[0]:
            raise DomainMismatchError("[Series.exp] argument must vanish at the origin")
        dom = self.domain
        c = self.coefficients
        out = [dom.one]
        for m in range(1, len(c)):
            acc = dom.zero
            for k in range(1, m + 1):
                if c[k]:
                    acc += k * c[k] * out[m - k]
            out.append(acc / dom.convert(m))
        return self._new(out)

    def log_derivative(self) -> "Series":
        return self.derivative() / self

    def compress(self, step: int, scale=1) -> "Series":
        """
        Re-express an even (step=2) or step-periodic series in X = scale*var^step.

        The new variable keeps the old name with a prime suffix unless renamed.
        """
        if self.shift != 0 or self.ramification != 1:
            raise DomainMismatchError("[Series.compress] needs an unshifted, unramified series")
        if any(c for k, c in enumerate(self.coefficients) if k % step):
            raise DomainMismatchError(f"[Series.compress] series is not a function of var^{step}")
        dom = self.domain
        scale = to_domain(scale, dom)
        coeffs, power = [], dom.one
        for m, c in enumerate(self.coefficients[::step]):
            coeffs.append(c / power)
            power = power * scale
        return self._new(coeffs)

    def rename(self, variable: str) -> "Series":
        out = self._new(list(self.coefficients))
        out.variable = variable
        return out

    def reduce(self, prime: int) -> "Series":
        """Image of a rational series in F_p."""
        dom = field_of(prime)
        return Series(self.coefficients, self.variable, ramification=self.ramification, shift=self.shift, domain=dom)

    def agree(self, other: "Series") -> bool:
        """True when both series coincide up to their common precision."""
        a, b = self._align(other)
        return a.coefficients == b.coefficients

    def evaluate(self, point, dps: int = 30):
        """Numeric value of the truncated sum at a real or complex point."""
        if self.prime is not None:
            raise DomainMismatchError("[Series.evaluate] cannot evaluate a mod-p series")
        with mpmath.workdps(dps):
            x = mpmath.mpmathify(point)
            root = x ** (mpmath.mpf(1) / self.ramification)
            total = mpmath.mpf(0)
            power = mpmath.mpf(1)
            for c in self.coefficients:
                if c:
                    total += mpmath.mpf(int(c.numerator)) / int(c.denominator) * power
                power *= root
            lead = x ** (mpmath.mpf(int(self.shift.numerator)) / int(self.shift.denominator)) if self.shift else 1
            return +(total * lead)

    def to_floats(self) -> List[float]:
        return [float(int(c.numerator)) / float(int(c.denominator)) if c else 0.0 for c in self.coefficients]

    # -- serialization -------------------------------------------------------------
    def to_dict(self) -> Dict[str, Any]:
        prime = self.prime
        if prime is None:
            coeffs = [format_rational(c) for c in self.coefficients]
        else:
            coeffs = [str(to_int(c, self.domain)) for c in self.coefficients]
        return {
            "format": SERIES_FORMAT,
            "variable": self.variable,
            "ramification": self.ramification,
            "prime": prime,
            "order": self.order,
            "shift": format_rational(self.shift),
            "coefficients": coeffs,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Series":
        prime = data.get("prime")
        dom = field_of(prime)
        coeffs = [parse_rational(c) if prime is None else int(c) for c in data["coefficients"]]
        if len(coeffs) != int(data.get("order", len(coeffs) - 1)) + 1:
            raise TruncationError("[Series.from_dict] order does not match the coefficient count")
        return cls(
            coeffs,
            data.get("variable", "t"),
            ramification=int(data.get("ramification", 1)),
            shift=parse_rational(data.get("shift", "0")),
            domain=dom,
        )


def _cauchy(a: Sequence, b: Sequence, n: int, zero) -> List:
    """First n coefficients of the product of two coefficient lists."""
    out = []
    nz_a = [(i, x) for i, x in enumerate(a[:n]) if x]
    for m in range(n):
        acc = zero
        for i, x in nz_a:
            if i > m:
                break
            y = b[m - i]
            if y:
                acc += x * y
        out.append(acc)
    return out


def series_mul(a: Series, b: Series) -> Series:
    """Cauchy product, truncation min(Ta, Tb); shifts add."""
    if a.ramification != b.ramification:
        raise DomainMismatchError(
            f"[series_mul] ramification mismatch: {a.ramification} vs {b.ramification}"
        )
    return a * b


def series_pow_rational(a: Series, exponent) -> Series:
    return a.pow_rational(exponent)


def series_map(a: Series, func: Callable[[int, Any], Any]) -> Series:
    """Apply func(index, coefficient) to each coefficient."""
    return a._new([func(k, c) for k, c in enumerate(a.coefficients)])
