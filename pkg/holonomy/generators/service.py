"""
'generators/service.py': Generator registry and cached generation entry point.
"""
import logging
from typing import Any, Callable, Dict, Optional

from holonomy.generators.cache import SeriesCache, cache_key
from holonomy.generators.formfactors import f2_oracle, formfactor, lambda_correlation
from holonomy.generators.hypergeometric import elliptic_EK, hypergeometric
from holonomy.generators.integrals import phiD, phiH_fourier
from holonomy.generators.lattice import phiH_lattice
from holonomy.generators.schemas import Branch, FormFactorRequest, SeriesTarget
from holonomy.rings.series import Series
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.generators.service")


def phiH(n: int, order: int, prime: Optional[int] = None, method: str = "lattice") -> Series:
    """Phi_H^(n) to order w^T by the lattice sum (default) or by Fourier modes."""
    if method == "fourier":
        out = phiH_fourier(n, order)
        return out if prime is None else out.reduce(prime)
    return phiH_lattice(n, order, prime)


def _phiH(order: int, prime: Optional[int] = None, n: int = 1, method: str = "lattice", **_) -> Series:
    return phiH(n, order, prime, method)


def _phiD(order: int, prime: Optional[int] = None, n: int = 2, **_) -> Series:
    return phiD(n, order, prime)


def _elliptic(index: int):
    def gen(order: int, prime: Optional[int] = None, **_) -> Series:
        return elliptic_EK(order, prime=prime)[index]
    return gen


def _hyper(order: int, prime: Optional[int] = None, upper=(), lower=(), variable: str = "t", **_) -> Series:
    return hypergeometric(list(upper), list(lower), variable, order, prime)


def _formfactor(order: int, prime: Optional[int] = None, j: int = 1, N: int = 0, lam=None, **_) -> Series:
    branch = Branch.BELOW if j % 2 == 0 else Branch.ABOVE
    out = formfactor(FormFactorRequest(branch=branch, j=j, N=N, order=order, lam=lam))
    return out if prime is None else out.reduce(prime)


def _f2(order: int, prime: Optional[int] = None, N: int = 0, **_) -> Series:
    out = f2_oracle(N, order)
    return out if prime is None else out.reduce(prime)


def _correlation(order: int, prime: Optional[int] = None, N: int = 0, lam="1", branch: str = "below", **_) -> Series:
    out = lambda_correlation(Branch(branch), N, lam, order)
    return out if prime is None else out.reduce(prime)


GENERATORS: Dict[str, Callable[..., Series]] = {
    SeriesTarget.HYPERGEOMETRIC.value: _hyper,
    SeriesTarget.ELLIPTIC_E.value: _elliptic(0),
    SeriesTarget.ELLIPTIC_K.value: _elliptic(1),
    SeriesTarget.PHI_H.value: _phiH,
    SeriesTarget.PHI_D.value: _phiD,
    SeriesTarget.FORMFACTOR.value: _formfactor,
    SeriesTarget.F2_ORACLE.value: _f2,
    SeriesTarget.CORRELATION.value: _correlation,
}


def get_generator(target: str) -> Callable[..., Series]:
    """
    Factory method to return the series generator of a target.

    Raises:
        ValueError: If the target is not supported.
    """
    try:
        return GENERATORS[SeriesTarget(target).value]
    except ValueError:
        raise ValueError(f"Unsupported target: {target}. Choose one of {SeriesTarget.list()}")


def generate(
    target: str,
    order: int,
    prime: Optional[int] = None,
    cache: Optional[SeriesCache] = None,
    **params: Any,
) -> Series:
    """
    Generate (or fetch from the cache) the series of a target.

    Args:
        target (str): A SeriesTarget value.
        order (int): Truncation order.
        prime (Optional[int]): Work modulo this prime.
        cache (Optional[SeriesCache]): Cache to consult; defaults to $HOLONOMY_CACHE_DIR.
        **params: Target parameters (n, N, j, lam, branch, method, upper, lower).
    """
    generator = get_generator(target)
    cache = cache if cache is not None else SeriesCache()
    key = cache_key(target, params, prime, order)
    cached = cache.fetch(key)
    if cached is not None:
        return cached
    with timed_event(f"generate {target}", {"order": order, "prime": prime, **{k: str(v) for k, v in params.items()}}):
        series = generator(order=order, prime=prime, **params)
    cache.save(key, series, {"target": target, "params": {k: str(v) for k, v in params.items()}})
    logger.info(f"[generate] {target} order={order} prime={prime} params={params}")
    return series
