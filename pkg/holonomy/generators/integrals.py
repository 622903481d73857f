"""
'holonomy/generators/integrals.py': Fourier-mode expansions of the n-fold and single-angle integrals.
"""
import logging
from math import factorial
from typing import Dict, List, Optional, Tuple

import mpmath

from holonomy.exceptions import BadPrimeError, QuadratureError, TruncationError
from holonomy.generators.schemas import ModeCoefficient
from holonomy.rings.fields import QQ, to_mpf
from holonomy.rings.series import Series
from holonomy.rings.trig import TrigSeries, exponential_coeff, fourier_coeff, trig_mode_scale, trig_mul

logger = logging.getLogger("holonomy.generators.integrals")


def xy_of_phi(order: int, variable: str = "w", budget: Optional[int] = None) -> Tuple[TrigSeries, TrigSeries]:
    """
    x(phi) = 2w / (1 - 2w cos phi + sqrt((1 - 2w cos phi)^2 - 4w^2)) and y(phi) = 1/sqrt(...).

    The square root is the branch equal to 1 at w = 0, so x = O(w). Modes above
    `budget` (default: order) are dropped.
    """
    if order < 1:
        raise TruncationError(f"[xy_of_phi] order must be >= 1, got {order}")

    def mono(power, mode, coeff):
        return TrigSeries.monomial(power, mode, coeff, order, variable, budget=budget)

    a = mono(0, 0, 1) - mono(1, 1, 2)
    disc = trig_mul(a, a) - mono(2, 0, 4)
    y = disc.pow_rational(QQ(-1, 2))
    half_sum = (a + disc.pow_rational(QQ(1, 2))).scale(QQ(1, 2))
    x = trig_mul(mono(1, 0, 1), half_sum.pow_rational(-1))
    return x, y


def mode_coefficients(n: int, order: int, variable: str = "w") -> List[ModeCoefficient]:
    """Exponential mode coefficients of y*x^p needed for Phi_H^(n) to order w^T, sorted by (k, p)."""
    limit = order // n
    x, y = xy_of_phi(max(order, 1), variable)
    out = []
    current = y
    for p in range(limit + 1):
        for k in range(limit - p + 1):
            out.append(ModeCoefficient(k, p, exponential_coeff(current, k)))
        current = trig_mul(current, x)
    return sorted(out, key=lambda m: (m.k, m.p))


def phiH_fourier(n: int, order: int, variable: str = "w") -> Series:
    """
    Phi_H^(n) by the convolution identity on Fourier modes:

        n! Phi_H = sum_k c(k,0)^n + 2 sum_{p>=1} sum_k c(k,p)^n,

    with the sum over k in Z folded onto k >= 0.
    """
    total = Series.from_polynomial([], order, variable)
    for mode in mode_coefficients(n, order, variable):
        term = mode.value ** n
        weight = (1 if mode.k == 0 else 2) * (1 if mode.p == 0 else 2)
        total = total + term.scale(weight)
    return total.scale(QQ(1, factorial(n)))


def _exp_poly(series: TrigSeries) -> List[Dict[int, object]]:
    """Cosine coefficients to exponential ones: c cos(k phi) -> c/2 (e^{ik phi} + e^{-ik phi})."""
    out = []
    for term in series.terms:
        d: Dict[int, object] = {}
        for k, c in term.items():
            if k == 0:
                d[0] = c
            else:
                d[k] = c / 2
                d[-k] = c / 2
        out.append(d)
    return out


def _bivariate(series: TrigSeries, weights: Tuple[int, int]) -> List[Dict[Tuple[int, int], object]]:
    """f(w1*phi1 + w2*phi2) as a bivariate exponential polynomial per w-order."""
    a, b = weights
    return [{(k * a, k * b): c for k, c in term.items()} for term in _exp_poly(series)]


def _bimul(u, v, order):
    out = [dict() for _ in range(order + 1)]
    for m1, t1 in enumerate(u):
        if not t1:
            continue
        for m2 in range(order + 1 - m1):
            t2 = v[m2]
            if not t2:
                continue
            acc = out[m1 + m2]
            for (k1, k2), c1 in t1.items():
                for (l1, l2), c2 in t2.items():
                    key = (k1 + l1, k2 + l2)
                    acc[key] = acc.get(key, 0) + c1 * c2
    return [{k: c for k, c in t.items() if c} for t in out]


def phiH3_bruteforce(order: int, variable: str = "w") -> Series:
    """
    Phi_H^(3) by direct expansion of the integrand in two free angles.

    phi_3 = -phi_1 - phi_2; the constant mode of
    y1 y2 y3 (1 + X)/(1 - X) with X = x1 x2 x3 is taken order by order.
    """
    x, y = xy_of_phi(max(order, 1), variable)
    frames = [(1, 0), (0, 1), (-1, -1)]
    ys = [_bivariate(y, f) for f in frames]
    xs = [_bivariate(x, f) for f in frames]
    X = _bimul(_bimul(xs[0], xs[1], order), xs[2], order)
    Y = _bimul(_bimul(ys[0], ys[1], order), ys[2], order)
    # (1 + X)/(1 - X) = 1 + 2 sum_{m>=1} X^m
    ratio = [dict() for _ in range(order + 1)]
    ratio[0] = {(0, 0): QQ(1)}
    power = X
    while any(power):
        for m, term in enumerate(power):
            for key, c in term.items():
                ratio[m][key] = ratio[m].get(key, 0) + 2 * c
        power = _bimul(power, X, order)
    integrand = _bimul(Y, ratio, order)
    coeffs = [QQ.convert(t.get((0, 0), 0)) for t in integrand]
    return Series(coeffs, variable).scale(QQ(1, 6))


def phiD(n: int, order: int, prime: Optional[int] = None, variable: str = "w") -> Series:
    """
    Phi_D^(n) = -1/n! + (2/n!) * mode0 of 1/(1 - x(phi)^(n-1) x((n-1) phi)).

    Raises:
        TruncationError: For n < 2 or order < 1.
        BadPrimeError: If the prime divides n!.
    """
    if n < 2:
        raise TruncationError(f"[phiD] n must be >= 2, got {n}")
    if prime is not None and prime <= n:
        raise BadPrimeError(f"[phiD] prime {prime} divides {n}!")
    order = max(order, 1)
    # modes of x((n-1)phi) grow n-1 times faster than their w-order
    x, _ = xy_of_phi(order, variable, budget=(n - 1) * order)
    power = x
    for _ in range(n - 2):
        power = trig_mul(power, x)
    product = trig_mul(power, trig_mode_scale(x, n - 1))
    mean = fourier_coeff(product.geometric(), 0)
    nf = factorial(n)
    out = mean.scale(QQ(2, nf)) - QQ(1, nf)
    logger.info(f"[phiD] n={n}, T={order}")
    return out if prime is None else out.reduce(prime)


def x_numeric(w, phi):
    """Numeric x(phi) on the branch with x = O(w)."""
    a = 1 - 2 * w * mpmath.cos(phi)
    return 2 * w / (a + mpmath.sqrt(a * a - 4 * w * w))


def phiD_quadrature(n: int, w, dps: int = 30):
    """
    Phi_D^(n)(w) by adaptive quadrature of (1/n!)(1/2pi) int (1+X)/(1-X) dphi.

    Raises:
        QuadratureError: If the estimated error is not small.
    """
    with mpmath.workdps(dps):
        w = to_mpf(w)

        def integrand(phi):
            X = x_numeric(w, phi) ** (n - 1) * x_numeric(w, (n - 1) * phi)
            return (1 + X) / (1 - X)

        value, error = mpmath.quad(integrand, mpmath.linspace(0, 2 * mpmath.pi, 2 * n + 1), error=True)
        if error > mpmath.mpf(10) ** (-(dps // 2)):
            raise QuadratureError(f"[phiD_quadrature] error estimate {error} too large")
        return value / (2 * mpmath.pi * factorial(n))
