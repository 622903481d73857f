"""'holonomy/generators/hypergeometric.py': Generalized hypergeometric and elliptic series."""
from typing import Optional, Sequence, Tuple

from holonomy.exceptions import DomainMismatchError
from holonomy.rings.fields import QQ, field_of, parse_rational, to_domain
from holonomy.rings.series import Series


def hypergeometric(
    upper: Sequence,
    lower: Sequence,
    variable: str = "t",
    order: int = 20,
    prime: Optional[int] = None,
) -> Series:
    """
    pFq(upper; lower; var) truncated at var^order.

    Args:
        upper: Numerator parameters (ints, rationals or 'a/b' strings).
        lower: Denominator parameters; none may be a nonpositive integer.
        variable (str): Series variable.
        order (int): Truncation order T.
        prime (Optional[int]): Compute in F_p instead of QQ.

    Returns:
        Series: c_0 = 1, c_{m+1}/c_m = prod(a+m)/prod(b+m)/(m+1).

    Raises:
        DomainMismatchError: If a lower parameter is a pole.
    """
    upper = [QQ.convert(parse_rational(a)) if isinstance(a, str) else QQ.convert(a) for a in upper]
    lower = [QQ.convert(parse_rational(b)) if isinstance(b, str) else QQ.convert(b) for b in lower]
    for b in lower:
        if b.denominator == 1 and b <= 0:
            raise DomainMismatchError(f"[hypergeometric] lower parameter {b} is a pole")
    coeffs = [QQ(1)]
    for m in range(order):
        num = QQ(1)
        for a in upper:
            num *= a + m
        den = QQ(m + 1)
        for b in lower:
            den *= b + m
        coeffs.append(coeffs[-1] * num / den)
    dom = field_of(prime)
    return Series([to_domain(c, dom) for c in coeffs], variable, domain=dom)


def elliptic_EK(order: int, variable: str = "t", prime: Optional[int] = None) -> Tuple[Series, Series]:
    """E = 2F1(1/2,-1/2;1;t) and K = 2F1(1/2,1/2;1;t) in the modulus-squared convention."""
    half = QQ(1, 2)
    K = hypergeometric([half, half], [1], variable, order, prime)
    E = hypergeometric([half, -half], [1], variable, order, prime)
    return E, K
