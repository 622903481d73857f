"""'holonomy/rings/fields.py': Coefficient fields, CRT and rational reconstruction."""
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import mpmath
from sympy import isprime, prevprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.domains.domain import Domain

from holonomy.exceptions import BadPrimeError, ReconstructionError

MIN_PRIME = 2 ** 14
MAX_PRIME = 2 ** 62
REFERENCE_PRIMES = (27449, 32749)


@lru_cache(maxsize=None)
def prime_field(p: int) -> Domain:
    """
    Return the prime field F_p with representatives in [0, p).

    Raises:
        BadPrimeError: If p is not a prime inside (2^14, 2^62).
    """
    if not (MIN_PRIME < p < MAX_PRIME) or not isprime(p):
        raise BadPrimeError(f"[prime_field] {p} is not a prime in (2^14, 2^62)")
    return GF(p, symmetric=False)


def field_of(prime: Optional[int]) -> Domain:
    """QQ when prime is None, F_p otherwise."""
    return QQ if prime is None else prime_field(prime)


def characteristic(domain: Domain) -> Optional[int]:
    """The prime of a finite field, None for QQ."""
    c = domain.characteristic()
    return int(c) if c else None


def parse_rational(text) -> "QQ.dtype":
    """Parse 'num/den' (or an int) into a QQ element."""
    if isinstance(text, int):
        return QQ(text)
    text = str(text).strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return QQ(int(num), int(den))
    return QQ(int(text))


def format_rational(value) -> str:
    """Render a rational as 'num/den', integers as plain digits."""
    value = QQ.convert(value) if not hasattr(value, "denominator") else value
    if value.denominator == 1:
        return str(int(value.numerator))
    return f"{int(value.numerator)}/{int(value.denominator)}"


def to_mpf(value):
    """mpf at the current precision from a rational of any ground type, a float or a 'num/den' string."""
    if isinstance(value, str) and "/" in value:
        value = parse_rational(value)
    if hasattr(value, "denominator"):
        return mpmath.mpf(int(value.numerator)) / int(value.denominator)
    return mpmath.mpmathify(value)


def reduce_rational(value, p: int) -> int:
    """
    Reduce a rational number modulo p.

    Raises:
        BadPrimeError: If p divides the denominator.
    """
    num, den = int(value.numerator), int(value.denominator)
    if den % p == 0:
        raise BadPrimeError(f"[reduce_rational] {p} divides the denominator {den}")
    return num * pow(den, -1, p) % p


def to_domain(value, domain: Domain):
    """Convert an int or rational into the given field."""
    if domain is QQ:
        return value if isinstance(value, QQ.dtype) else QQ.convert(value)
    p = characteristic(domain)
    if isinstance(value, int):
        return domain(value % p)
    if hasattr(value, "denominator"):
        return domain(reduce_rational(value, p))
    return domain.convert(value)


def to_int(value, domain: Domain) -> int:
    """Integer representative of a finite-field element."""
    return int(domain.to_int(value)) % characteristic(domain)


def crt(residues: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """
    Chinese remaindering of (value, modulus) pairs with coprime moduli.

    Returns:
        Tuple[int, int]: The combined residue in [0, M) and M.
    """
    value, modulus = 0, 1
    for r, m in residues:
        if gcd(modulus, m) != 1:
            raise ReconstructionError(f"[crt] moduli {modulus} and {m} are not coprime")
        t = ((r - value) * pow(modulus, -1, m)) % m
        value += modulus * t
        modulus *= m
    return value % modulus, modulus


def reconstruct_from_residue(value: int, modulus: int):
    """
    Wang rational reconstruction: the unique p/q = value mod modulus with |p|, q <= sqrt(modulus/2).

    Raises:
        ReconstructionError: If no admissible fraction exists.
    """
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, value % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        raise ReconstructionError(f"[rational_reconstruct] no fraction below {bound} for residue mod {modulus}")
    if s1 < 0:
        r1, s1 = -r1, -s1
    return QQ(r1, s1)


def rational_reconstruct(residues: Sequence[Tuple[int, int]]):
    """
    CRT-combine (value, prime) residues and reconstruct the rational number.

    Args:
        residues: Pairs (value mod p, p) with pairwise distinct primes.

    Returns:
        The rational p/q with |p|, q <= sqrt(M/2).

    Raises:
        ReconstructionError: When the combined modulus is too small.
    """
    primes = [m for _, m in residues]
    if len(set(primes)) != len(primes):
        raise ReconstructionError("[rational_reconstruct] primes must be pairwise distinct")
    value, modulus = crt(residues)
    return reconstruct_from_residue(value, modulus)


def default_primes(count: int = 12, head: Iterable[int] = REFERENCE_PRIMES) -> List[int]:
    """The reproduction primes followed by the largest primes below 2^31."""
    primes = [p for p in head]
    p = 2 ** 31
    while len(primes) < count:
        p = prevprime(p)
        if p not in primes:
            primes.append(p)
    return primes


def iter_primes(start: Sequence[int]) -> Iterator[int]:
    """Yield the given primes, then fresh primes below the smallest large one."""
    seen = set()
    for p in start:
        if p not in seen:
            seen.add(p)
            yield p
    p = min([q for q in start if q > 2 ** 30] or [2 ** 31])
    while True:
        p = prevprime(p)
        if p not in seen:
            seen.add(p)
            yield p


def integer_content(values: Iterable) -> Tuple[int, int]:
    """
    Return (lcm of denominators, gcd of cleared numerators) of rationals.
    """
    values = list(values)
    den = 1
    for v in values:
        d = int(v.denominator)
        den = den * d // gcd(den, d)
    g = 0
    for v in values:
        g = gcd(g, int(v.numerator) * (den // int(v.denominator)))
    return den, g


__all__ = [
    "QQ", "ZZ", "prime_field", "field_of", "characteristic", "parse_rational", "format_rational",
    "reduce_rational", "to_domain", "to_int", "crt", "rational_reconstruct", "reconstruct_from_residue",
    "default_primes", "iter_primes", "integer_content", "REFERENCE_PRIMES",
]
