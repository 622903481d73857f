"""
'modular/elliptic.py': j-invariant, Landen maps, the elliptic nome and the degree-2 modular curve.
"""
import logging
from collections import namedtuple
from typing import List, Sequence, Tuple, Union

import mpmath
import sympy
from sympy.polys.domains import QQ

from holonomy.exceptions import DomainMismatchError, QuadratureError
from holonomy.modular.schemas import Direction, NomeResult
from holonomy.rings.fields import parse_rational

logger = logging.getLogger("holonomy.modular.elliptic")

AGM_MAX_STEPS = 200
DEFAULT_DPS = 30

# Fourier coefficients of j(tau) = 1/q + 744 + sum c_n q^n, q = exp(2 pi i tau)
J_COEFFICIENTS = (
    744,
    196884,
    21493760,
    864299970,
    20245856256,
    333202640600,
    4252023300096,
    44656994071935,
    401490886656000,
    3176440229784420,
    22567393309593600,
)

HeegnerCheck = namedtuple("HeegnerCheck", ["tau", "j", "nearest", "deviation", "tail"])

_k = sympy.Symbol("k")
_w = sympy.Symbol("w")
_J = sympy.Symbol("J")


def _is_exact(value) -> bool:
    return isinstance(value, (int, str)) or isinstance(value, QQ.dtype) or (
        isinstance(value, sympy.Basic) and value.is_Rational
    )


def j_of_k(k, dps: int = DEFAULT_DPS):
    """
    j = 256 (1 - k^2 + k^4)^3 / (k^4 (1 - k^2)^2).

    Exact for rational input, mpmath otherwise.

    Raises:
        DomainMismatchError: At the poles k = 0, +-1.
    """
    if _is_exact(k):
        k = parse_rational(k) if not isinstance(k, sympy.Basic) else QQ.from_sympy(k)
        k2 = k * k
        den = k2 * k2 * (1 - k2) ** 2
        if not den:
            raise DomainMismatchError(f"[j_of_k] pole at k = {k}")
        return 256 * (1 - k2 + k2 * k2) ** 3 / den
    with mpmath.workdps(dps):
        k = mpmath.mpmathify(k)
        k2 = k * k
        den = k2 * k2 * (1 - k2) ** 2
        if abs(den) < mpmath.mpf(10) ** (-dps + 5):
            raise DomainMismatchError(f"[j_of_k] pole at k = {k}")
        return 256 * (1 - k2 + k2 * k2) ** 3 / den


def _expr(coefficients: Sequence, symbol):
    return sum(sympy.Rational(str(parse_rational(c))) * symbol ** i for i, c in enumerate(coefficients))


def j_values_of_k_polynomial(coefficients: Sequence) -> List:
    """
    Exact j-values at the roots of a polynomial in k: rational roots of
    res_k(g(k), J k^4 (1-k^2)^2 - 256 (1-k^2+k^4)^3); irreducible higher factors as strings.
    """
    g = _expr(coefficients, _k)
    relation = _J * _k ** 4 * (1 - _k ** 2) ** 2 - 256 * (1 - _k ** 2 + _k ** 4) ** 3
    res = sympy.Poly(sympy.resultant(g, relation, _k), _J)
    if res.is_zero:
        raise DomainMismatchError("[j_values_of_k_polynomial] the polynomial meets a pole of j")
    out = []
    _, factors = res.factor_list()
    for f, _ in factors:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            out.append(QQ.from_sympy(-b / a))
        elif f.degree() > 1:
            out.append(str(f.as_expr()))
    return out


def k_polynomial_of_w(coefficients: Sequence) -> sympy.Poly:
    """Polynomial in k = s^2 whose roots are the images of the roots of f(w), via 4 w^2 (1+k)^2 = k."""
    f = _expr(coefficients, _w)
    return sympy.Poly(sympy.resultant(f, 4 * _w ** 2 * (1 + _k) ** 2 - _k, _w), _k)


def j_values_of_w_polynomial(coefficients: Sequence) -> List:
    g = k_polynomial_of_w(coefficients)
    return j_values_of_k_polynomial([sympy.Rational(c) for c in reversed(g.all_coeffs())])


class VariableFrame:
    """
    Conversions between s, k = s^2, t = k^2 and w with 1/w = 2 (s + 1/s).

    w(s) = w(1/s); |s| = 1 exactly when 1/w is real in [-4, 4].
    """

    @staticmethod
    def w_of_s(s):
        return s / (2 * (1 + s * s))

    @staticmethod
    def s_of_w(w) -> Tuple:
        """Both roots of 2 w s^2 - s + 2 w = 0; their product is 1."""
        w = mpmath.mpmathify(w)
        root = mpmath.sqrt(1 - 16 * w * w)
        return (1 - root) / (4 * w), (1 + root) / (4 * w)

    @staticmethod
    def k_of_s(s):
        return s * s

    @staticmethod
    def t_of_k(k):
        return k * k

    @staticmethod
    def kw_dual(s):
        return 1 / s

    @classmethod
    def k_of_w(cls, w) -> Tuple:
        return tuple(cls.k_of_s(s) for s in cls.s_of_w(w))

    @classmethod
    def on_unit_circle(cls, w, tol: float = 1e-12) -> bool:
        return all(abs(abs(s) - 1) < tol for s in cls.s_of_w(w))


def landen(k, direction: Union[Direction, str], dps: int = DEFAULT_DPS):
    """
    Descending: (1 - sqrt(1-k^2)) / (1 + sqrt(1-k^2)); ascending: 2 sqrt(k) / (1 + k).
    Principal square roots.

    Raises:
        DomainMismatchError: For real k > 1 in the descending direction (branch cut).
    """
    direction = Direction(direction)
    with mpmath.workdps(dps):
        k = mpmath.mpmathify(k)
        if direction == Direction.DESCENDING:
            if mpmath.im(k) == 0 and mpmath.re(k) > 1:
                raise DomainMismatchError(f"[landen] k = {k} lies on the branch cut of sqrt(1 - k^2)")
            c = mpmath.sqrt(1 - k * k)
            return (1 - c) / (1 + c)
        return 2 * mpmath.sqrt(k) / (1 + k)


def landen_fixed_points(direction: Union[Direction, str]) -> List[Tuple[List, int]]:
    """
    Factors (little-endian integer coefficients, multiplicity) of the condition k1^2 = k^2.
    """
    direction = Direction(direction)
    if direction == Direction.ASCENDING:
        condition = 4 * _k - _k ** 2 * (1 + _k) ** 2
    else:
        c = sympy.Symbol("c")
        numer = (1 - c) ** 2 - (1 - c ** 2) * (1 + c) ** 2
        condition = sympy.resultant(sympy.expand(numer), c ** 2 - (1 - _k ** 2), c)
    _, factors = sympy.Poly(condition, _k).factor_list()
    out = []
    for f, mult in factors:
        if f.degree() < 1:
            continue
        coeffs = [int(c) for c in reversed(f.all_coeffs())]
        if coeffs[0] < 0 or (coeffs[0] == 0 and coeffs[-1] < 0):
            coeffs = [-c for c in coeffs]
        out.append((coeffs, int(mult)))
    return sorted(out, key=lambda item: (len(item[0]), item[0]))


def kw_image(coefficients: Sequence) -> List:
    """k -> 1/k image of a polynomial: its reversal."""
    coeffs = list(coefficients)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return list(reversed(coeffs))


def _agm(a, b, trace: List) -> Tuple:
    for step in range(AGM_MAX_STEPS):
        if abs(a - b) <= abs(a) * mpmath.eps * 8:
            return a, step
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
        if mpmath.re(b) < 0 or (mpmath.re(b) == 0 and mpmath.im(b) < 0):
            b = -b
        trace.append((a, b))
    raise QuadratureError(f"[agm] no convergence after {AGM_MAX_STEPS} steps; last {trace[-3:]}")


def complete_K(m, trace: List = None) -> Tuple:
    """K(m) = pi / (2 AGM(1, sqrt(1 - m))) with the right-half-plane branch rule."""
    trace = [] if trace is None else trace
    b = mpmath.sqrt(1 - m)
    if mpmath.re(b) < 0:
        b = -b
    value, steps = _agm(mpmath.mpf(1), b, trace)
    if value == 0:
        raise QuadratureError("[complete_K] AGM collapsed to zero")
    return mpmath.pi / (2 * value), steps


def canonical_tau(tau):
    """Representative of tau modulo tau -> tau + 1 and Re tau -> -Re tau, with 0 <= Re <= 1/2."""
    x = mpmath.re(tau) - mpmath.floor(mpmath.re(tau))
    if x > mpmath.mpf(1) / 2:
        x = 1 - x
    return mpmath.mpc(x, abs(mpmath.im(tau)))


def tau_equivalent(a, b, tol: float = 1e-8) -> bool:
    return abs(canonical_tau(a) - canonical_tau(b)) < tol


def nome_tau(k, dps: int = DEFAULT_DPS) -> NomeResult:
    """
    q = exp(-pi K(1-k^2) / K(k^2)) = exp(i pi tau) by complex AGM.

    Raises:
        DomainMismatchError: For real k^2 >= 1.
        QuadratureError: If an AGM iteration does not converge.
    """
    with mpmath.workdps(dps):
        k = mpmath.mpmathify(k)
        m = k * k
        if mpmath.im(m) == 0 and mpmath.re(m) >= 1:
            raise DomainMismatchError(f"[nome_tau] k^2 = {m} outside the principal domain")
        K, n1 = complete_K(m)
        Kp, n2 = complete_K(1 - m)
        tau = mpmath.mpc(0, 1) * Kp / K
        if mpmath.im(tau) < 0:
            tau = -tau
        q = mpmath.exp(mpmath.mpc(0, 1) * mpmath.pi * tau)
        logger.info(f"[nome_tau] k={k}, tau={tau}")
        return NomeResult(k=k, K=K, Kp=Kp, q=q, tau=tau, canonical=canonical_tau(tau), iterations=[n1, n2])


def modular_curve_residual(j1, j2):
    """The symmetric degree-2 modular polynomial at (j1, j2); exact for exact input."""
    if _is_exact(j1) and _is_exact(j2):
        j, i = parse_rational(j1), parse_rational(j2)
    else:
        j, i = mpmath.mpmathify(j1), mpmath.mpmathify(j2)
    return (
        j * j * i * i
        - (j + i) * (j * j + 1487 * j * i + i * i)
        - 12 * 30 ** 6 * (j + i)
        + 3 * 15 ** 3 * (16 * j * j - 4027 * j * i + 16 * i * i)
        + 8 * 30 ** 9
    )


def j_of_tau(tau, terms: int = len(J_COEFFICIENTS), dps: int = DEFAULT_DPS) -> Tuple:
    """j(tau) from its q-expansion; returns (value, size of the first omitted term)."""
    if terms < 8 or terms > len(J_COEFFICIENTS):
        raise DomainMismatchError(f"[j_of_tau] terms must be in [8, {len(J_COEFFICIENTS)}]")
    with mpmath.workdps(dps):
        q = mpmath.exp(2 * mpmath.pi * mpmath.mpc(0, 1) * mpmath.mpmathify(tau))
        total = 1 / q
        power = mpmath.mpf(1)
        for c in J_COEFFICIENTS[:terms]:
            total += c * power
            power *= q
        nxt = J_COEFFICIENTS[terms] if terms < len(J_COEFFICIENTS) else 10 * J_COEFFICIENTS[-1]
        tail = abs(nxt * power)
        return total, tail


def heegner_check(n: int, dps: int = DEFAULT_DPS) -> HeegnerCheck:
    """tau = (1 + i sqrt(4n - 1)) / 2 and the distance of j(tau) from the nearest integer."""
    if n < 1:
        raise DomainMismatchError(f"[heegner_check] n must be >= 1, got {n}")
    with mpmath.workdps(dps):
        tau = (1 + mpmath.mpc(0, 1) * mpmath.sqrt(4 * n - 1)) / 2
        j, tail = j_of_tau(tau, dps=dps)
        nearest = int(mpmath.nint(mpmath.re(j)))
        deviation = abs(j - nearest)
        return HeegnerCheck(tau, j, nearest, deviation, tail)
