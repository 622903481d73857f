"""
'holonomy/generators/lattice.py': Phi_H^(n) through square-lattice Green functions.

The mode-k Fourier coefficient of y(phi)*x(phi)^p is the lattice Green function

    G(p, k; w) = sum_N C(N, (N+p+k)/2) * C(N, (N+p-k)/2) * w^N,

so Phi_H^(n) = (1/n!) * sum over (a, b) in Z^2 of G(a, b; w)^n. G(a, b) has
valuation |a| + |b| and the 8-fold symmetry of the lattice.
"""
import logging
from math import comb, factorial
from typing import Iterator, List, Optional, Tuple

import numpy as np

from holonomy.exceptions import BadPrimeError, TruncationError
from holonomy.rings.fields import QQ, field_of
from holonomy.rings.linalg import NUMPY_PRIME_LIMIT, kronecker_mul, polymul_mod
from holonomy.rings.series import Series

logger = logging.getLogger("holonomy.generators.lattice")


def lattice_points(n: int, order: int) -> Iterator[Tuple[int, int, int]]:
    """Yield (a, b, multiplicity) with 0 <= b <= a and n*(a+b) <= order."""
    for a in range(order // n + 1):
        for b in range(a + 1):
            if n * (a + b) > order:
                break
            if a == 0:
                weight = 1
            elif b == 0 or b == a:
                weight = 4
            else:
                weight = 8
            yield a, b, weight


def green_coefficients(a: int, b: int, order: int) -> List[int]:
    """Dense integer coefficients of G(a, b; w) up to w^order."""
    out = [0] * (order + 1)
    for N in range(a + b, order + 1, 2):
        out[N] = comb(N, (N + a + b) // 2) * comb(N, (N + a - b) // 2)
    return out


def _power_exact(coeffs: List[int], n: int, order: int) -> List[int]:
    out = coeffs
    for _ in range(n - 1):
        out = kronecker_mul(out, coeffs, order + 1)
    return out


def phiH_exact_integers(n: int, order: int) -> List[int]:
    """n! * Phi_H^(n) as exact integers (every lattice term is an integer series)."""
    total = [0] * (order + 1)
    for a, b, weight in lattice_points(n, order):
        g = green_coefficients(a, b, order)
        v = a + b
        # drop the common valuation before powering
        shifted = g[v:] if v else g
        powered = _power_exact(shifted, n, order - n * v)
        for i, c in enumerate(powered[: order - n * v + 1]):
            if c:
                total[i + n * v] += weight * c
    return total


class _BinomialTable:
    """Factorials and inverse factorials modulo p as int64 arrays."""

    def __init__(self, size: int, p: int):
        fact = np.ones(size + 1, dtype=np.int64)
        for i in range(1, size + 1):
            fact[i] = fact[i - 1] * i % p
        inv = np.ones(size + 1, dtype=np.int64)
        inv[size] = pow(int(fact[size]), -1, p)
        for i in range(size, 0, -1):
            inv[i - 1] = inv[i] * i % p
        self.fact, self.inv, self.p = fact, inv, p

    def binomial(self, N: np.ndarray, k: np.ndarray) -> np.ndarray:
        p = self.p
        return self.fact[N] * self.inv[k] % p * self.inv[N - k] % p


def phiH_mod_p_integers(n: int, order: int, p: int) -> np.ndarray:
    """n! * Phi_H^(n) modulo p with numpy convolutions; needs order < p < 2^31."""
    table = _BinomialTable(order, p)
    total = np.zeros(order + 1, dtype=np.int64)
    for a, b, weight in lattice_points(n, order):
        v = a + b
        length = order - n * v + 1
        N = np.arange(v, order + 1, 2, dtype=np.int64)
        g = np.zeros(order + 1 - v, dtype=np.int64)
        g[N - v] = table.binomial(N, (N + a + b) // 2) * table.binomial(N, (N + a - b) // 2) % p
        g = g[:length]
        powered = g
        for _ in range(n - 1):
            powered = polymul_mod(powered, g, p, length)
        total[n * v:] = (total[n * v:] + weight * powered[:length]) % p
    return total


def phiH_lattice(n: int, order: int, prime: Optional[int] = None, variable: str = "w") -> Series:
    """
    Phi_H^(n)(w) to order w^T by the lattice Green function sum.

    Args:
        n (int): Number of angles, n >= 1.
        order (int): Truncation order T >= 0.
        prime (Optional[int]): Compute modulo this prime (must exceed n).

    Returns:
        Series: Constant term 1/n! (its inverse image mod p).

    Raises:
        TruncationError: If order is negative.
        BadPrimeError: If the prime divides n!.
    """
    if n < 1:
        raise TruncationError(f"[phiH_lattice] n must be >= 1, got {n}")
    if order < 0:
        raise TruncationError(f"[phiH_lattice] order must be >= 0, got {order}")
    if prime is not None and prime <= n:
        raise BadPrimeError(f"[phiH_lattice] prime {prime} divides {n}!")
    dom = field_of(prime)
    if prime is not None and order < prime < NUMPY_PRIME_LIMIT:
        logger.info(f"[phiH_lattice] n={n}, T={order} modulo {prime} (numpy route)")
        ints = phiH_mod_p_integers(n, order, prime)
        scale = pow(factorial(n), -1, prime)
        return Series([int(c) * scale % prime for c in ints], variable, domain=dom)
    logger.info(f"[phiH_lattice] n={n}, T={order} exact")
    ints = phiH_exact_integers(n, order)
    scale = QQ(1, factorial(n))
    return Series([QQ(c) * scale for c in ints], variable, domain=dom)
