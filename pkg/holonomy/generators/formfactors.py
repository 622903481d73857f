"""
'holonomy/generators/formfactors.py': Diagonal form factors f^(j)_{N,N} and their lambda-extensions.

The form factors are generated from the sigma form of Painleve VI,

    (t(t-1) s'')^2 = N^2 ((t-1) s' - s)^2 - 4 s' ((t-1) s' - s - 1/4) (t s' - s),

expanded order by order in lambda^2. Below Tc the first order comes from the
double-integral oracle for f^(2); above Tc the zeroth order is the exact
f^(1). Every later order solves a linear equation in t whose free constants
sit below the known valuation; leading coefficients are checked against
products of Selberg integrals.
"""
import logging
from collections import namedtuple
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Tuple

from holonomy.exceptions import CalibrationError, TruncationError
from holonomy.generators.hypergeometric import hypergeometric
from holonomy.generators.schemas import Branch, FormFactorRequest
from holonomy.rings.fields import QQ, parse_rational
from holonomy.rings.series import Series, _cauchy
from holonomy.utils.events import add_event

logger = logging.getLogger("holonomy.generators.formfactors")

SigmaSeries = namedtuple("SigmaSeries", ["N", "branch", "series"])

QUARTER = QQ(1, 4)


# -- closed forms --------------------------------------------------------------------
def _half_ratios(count: int, start) -> List:
    """(start)_k / k! for k = 0..count."""
    out = [QQ(1)]
    for k in range(1, count + 1):
        out.append(out[-1] * (start + k - 1) / k)
    return out


def f1_series(N: int, order: int, variable: str = "t") -> Series:
    """The regular part g of f^(1)_{N,N} = t^(N/2) g(t), g = (1/2)_N/N! 2F1(1/2, N+1/2; N+1; t)."""
    half = QQ(1, 2)
    lead = _half_ratios(N, half)[N]
    return hypergeometric([half, N + half], [N + 1], variable, order).scale(lead)


def f1(N: int, order: int, variable: str = "t") -> Series:
    """f^(1)_{N,N} as a series in t^(1/2), exponents up to t^order."""
    g = f1_series(N, order, variable)
    return _ramified(g, QQ(N, 2), order)


def _ramified(regular: Series, shift, order: int) -> Series:
    """t^shift * regular as a ramification-2 series with shift 0 up to t^order."""
    out = regular.mul_power(shift).ramify(2).with_shift(0)
    if out.order < 2 * order:
        raise TruncationError(f"[formfactors] precision t^{out.precision} below t^{order}")
    return out.truncate(2 * order)


def f2_oracle(N: int, order: int, variable: str = "t") -> Series:
    """
    f^(2)_{N,N} from its double integral.

    (1 - t x1 x2)^(-2) = sum (m+1) t^m (x1 x2)^m factorizes the integral into
    beta-type integrals whose pi factors cancel the 1/pi^2 prefactor.
    """
    c = _half_ratios(order + 2, QQ(1, 2))
    d = _half_ratios(order + 2, QQ(-1, 2))
    total = [QQ(0)] * (order + 1)
    for m in range(max(order - N, 0)):
        a = N + m
        top = order - (N + 1 + m)
        A = [c[j] * c[a + 1 + j] for j in range(top + 1)]
        B = [d[j] * c[a + j] / (2 * (a + j + 1)) for j in range(top + 1)]
        for i, v in enumerate(_cauchy(A, B, top + 1, QQ(0))):
            if v:
                total[N + 1 + m + i] += (m + 1) * v
    return Series(total, variable)


def _gamma(x) -> Tuple[object, int]:
    """Gamma(x) = value * sqrt(pi)^k for a positive integer or half-integer x."""
    x = QQ.convert(x)
    if x.denominator == 1:
        return QQ(factorial(int(x.numerator) - 1)), 0
    m = int((x - QQ(1, 2)).numerator)
    return _half_ratios(m, QQ(1, 2))[m] * factorial(m), 1


def selberg(n: int, alpha, beta) -> Tuple[object, int]:
    """
    Selberg integral with gamma = 1 over [0,1]^n, as (rational, power of sqrt(pi)).
    """
    value, halves = QQ(1), 0
    for j in range(n):
        for x in (alpha + j, beta + j, QQ(j + 2)):
            v, h = _gamma(x)
            value, halves = value * v, halves + h
        v, h = _gamma(alpha + beta + n + j - 1)
        value, halves = value / v, halves - h
    return value, halves


def leading_coefficient(j: int, N: int):
    """t -> 0 leading coefficient of f^(j)_{N,N}."""
    half = QQ(1, 2)
    if j == 0:
        return QQ(1)
    n = j // 2
    if j % 2 == 0:
        a, ha = selberg(n, N + 3 * half, half)
        b, hb = selberg(n, N + half, 3 * half)
        expected, scale = 4 * n, QQ(1, factorial(n) ** 2)
    else:
        a, ha = selberg(n + 1, N + half, half)
        b, hb = selberg(n, N + 3 * half, 3 * half)
        expected, scale = 2 * (2 * n + 1), QQ(1, factorial(n) * factorial(n + 1))
    if ha + hb != expected:
        raise CalibrationError(f"[leading_coefficient] pi powers do not cancel for j={j}, N={N}")
    return a * b * scale


def leading_exponent(j: int, N: int):
    n = j // 2
    if j % 2 == 0:
        return QQ(n * (N + n))
    return QQ((2 * n + 1) * N, 2) + n * (n + 1)


# -- sigma-form machinery ------------------------------------------------------------
def _poly(X: Series, coeffs) -> Series:
    return Series.from_polynomial(coeffs, X.order, X.variable)


def _t_minus_one(X: Series) -> Series:
    return X.mul_power(1) - X


def _pvi_parts(sig: List[Series]):
    d1 = [s.derivative() for s in sig]
    d2 = [s.derivative() for s in d1]
    X = [_t_minus_one(s).mul_power(1) for s in d2]
    Pt = [_t_minus_one(a) - s for a, s in zip(d1, sig)]
    P = list(Pt)
    P[0] = P[0] - QUARTER
    Q = [a.mul_power(1) - s for a, s in zip(d1, sig)]
    return d1, X, Pt, P, Q


def _convolve(a: List[Series], b: List[Series], K: int, zero: Series) -> Series:
    acc = zero
    for i in range(K + 1):
        if a[i].is_zero() or b[K - i].is_zero():
            continue
        acc = acc + a[i] * b[K - i]
    return acc


def pvi_lambda_coefficient(sig: List[Series], N: int, K: int) -> Series:
    """
    Coefficient of lambda^(2K) in the residual of the sigma form for
    sigma = sum_k lambda^(2k) sig[k] (sig must reach index K).
    """
    d1, X, Pt, P, Q = _pvi_parts(sig[: K + 1])
    zero = Series.from_polynomial([], sig[0].order, sig[0].variable).mul_power(-2)
    quad = _convolve(X, X, K, zero) - _convolve(Pt, Pt, K, zero).scale(N * N)
    cubic = zero
    for i in range(K + 1):
        if d1[i].is_zero():
            continue
        PQ = _convolve(P, Q, K - i, zero)
        if not PQ.is_zero():
            cubic = cubic + d1[i] * PQ
    return quad + cubic.scale(4)


def pvi_expression(sigma: Series, N: int) -> Series:
    """Residual (t(t-1)s'')^2 - N^2((t-1)s'-s)^2 + 4s'((t-1)s'-s-1/4)(ts'-s) of one series."""
    return pvi_lambda_coefficient([sigma], N, 0)


def _dense(X: Series, count: int) -> List:
    return [X.coefficient(m) for m in range(count)]


def _rows(X: Series) -> int:
    p = X.precision
    return int(p.numerator // p.denominator)


def _solve_linear(coefs, rhs: List, valuation: int, seeds: Dict[int, object], label: str) -> List:
    """
    Solve sum_r M[m, r] u_r = rhs[m] for the operator

        L(u) = A u'' + B ((t-1)u' - u) + C (t u' - u) + D u'

    whose matrix is lower triangular up to a column shift s.
    """
    A, Bc, Cc, Dc = coefs

    def at(seq, i):
        return seq[i] if 0 <= i < len(seq) else QQ(0)

    def entry(m, r):
        k = m - r
        return (
            r * (r - 1) * at(A, k + 2)
            + (r - 1) * (at(Bc, k) + at(Cc, k))
            + r * (at(Dc, k + 1) - at(Bc, k + 1))
        )

    shift = None
    for s in range(-2, len(rhs)):
        if at(A, s + 2) or at(Bc, s) + at(Cc, s) or at(Dc, s + 1) - at(Bc, s + 1):
            shift = s
            break
    if shift is None or shift < 0:
        raise CalibrationError(f"[{label}] linearized sigma form has no usable diagonal (shift {shift})")
    for m in range(min(shift, len(rhs))):
        if rhs[m]:
            raise CalibrationError(f"[{label}] inconsistent row t^{m} above the diagonal")
    count = len(rhs) - shift
    u: List = []
    for r in range(count):
        m = r + shift
        acc = QQ(0)
        for rp, value in enumerate(u):
            if value:
                acc += entry(m, rp) * value
        diag = entry(m, r)
        if r in seeds:
            value = seeds[r]
        elif r < valuation:
            value = QQ(0)
        elif not diag:
            raise CalibrationError(f"[{label}] resonance at t^{r} without a seed")
        else:
            value = (rhs[m] - acc) / diag
        if acc + diag * value != rhs[m]:
            raise CalibrationError(f"[{label}] row t^{m} inconsistent with the fixed coefficient t^{r}")
        u.append(value)
    return u


def _log_from_sigma(sigma: Series) -> Series:
    """l with t(t-1) l' = sigma and l(0) = 0."""
    c = _dense(sigma, _rows(sigma))
    if c and c[0]:
        raise CalibrationError("[formfactors] sigma correction has a constant term")
    out, partial = [QQ(0)], QQ(0)
    for k in range(len(c) - 1):
        partial -= c[k + 1]
        out.append(partial / (k + 1))
    return Series(out, sigma.variable)


def _exp_lambda(logs: List[Series]) -> List[Series]:
    """Coefficients G_n of exp(sum_n lambda^(2n) l_n): G_n = (1/n) sum_k k l_k G_{n-k}."""
    G = [Series.constant(1, logs[1].order, logs[1].variable)]
    for n in range(1, len(logs)):
        acc = None
        for k in range(1, n + 1):
            term = (logs[k] * G[n - k]).scale(k)
            acc = term if acc is None else acc + term
        G.append(acc.scale(QQ(1, n)))
    return G


class LambdaRecursion:
    """
    Order-by-order solution of the sigma form in lambda^2 at fixed N and branch.

    Args:
        branch (Branch): below (even form factors) or above (odd form factors).
        N (int): Diagonal distance.
        order (int): Target order T in t of the produced form factors.
    """

    def __init__(self, branch: Branch, N: int, order: int, lambda_orders: Optional[int] = None):
        self.branch = Branch(branch)
        self.N = N
        self.order = order
        self.lambda_orders = max(lambda_orders or 0, saturating_order(branch, N, order))
        # each lambda order costs a few t-orders of precision
        self.margin = (self.lambda_orders + 2) * (N + 6)
        self.work = order + self.margin
        self.sigmas: List[Series] = []
        self._start()

    def _start(self) -> None:
        N, W = self.N, self.work
        t = Series.from_polynomial([0, 1], W)
        if self.branch == Branch.BELOW:
            f2 = f2_oracle(N, W)
            sigma1 = _t_minus_one(f2.derivative()).mul_power(1)
            self.sigmas = [Series.from_polynomial([], W), sigma1]
            check = pvi_lambda_coefficient(self.sigmas + [Series.from_polynomial([], W)], N, 2)
            if not check.is_zero():
                raise CalibrationError(f"[LambdaRecursion] f^(2) oracle does not satisfy the sigma form at N={N}")
            self.coefs = self._linearization(sigma1, quadratic_only=True)
        else:
            g = f1_series(N, W)
            log_g = g.derivative() / g
            sigma0 = (t.scale(QUARTER) - QUARTER) + _t_minus_one(Series.constant(QQ(N, 2), W)) \
                + _t_minus_one(log_g).mul_power(1)
            residual = pvi_expression(sigma0, N)
            if not residual.is_zero():
                raise CalibrationError(f"[LambdaRecursion] f^(1) does not satisfy the sigma form at N={N}")
            self.sigmas = [sigma0]
            self.coefs = self._linearization(sigma0, quadratic_only=False)
        logger.debug(f"[LambdaRecursion] started branch={self.branch.value} N={N} work={W}")

    def _linearization(self, s: Series, quadratic_only: bool):
        """Dense coefficients of the derivative of the sigma form at s."""
        N = self.N
        d1 = s.derivative()
        d2 = d1.derivative()
        tt1 = _t_minus_one(s.constant_like(1).mul_power(1))
        A = (tt1 * tt1 * d2).scale(2)
        Pt = _t_minus_one(d1) - s
        Q = d1.mul_power(1) - s
        if quadratic_only:
            Bc = Pt.scale(-2 * N * N)
            Cc = -d1
            Dc = -Q
        else:
            P = Pt - QUARTER
            Bc = Pt.scale(-2 * N * N) + (d1 * Q).scale(4)
            Cc = (d1 * P).scale(4)
            Dc = (P * Q).scale(4)
        rows = min(_rows(x) for x in (A, Bc, Cc, Dc))
        return tuple(_dense(x, rows) for x in (A, Bc, Cc, Dc))

    def _valuation(self, n: int) -> int:
        return n * (self.N + 1) if self.branch == Branch.BELOW else n * (self.N + 2)

    def extend(self, n_max: int) -> None:
        """Compute sigma corrections up to lambda^(2 n_max)."""
        below = self.branch == Branch.BELOW
        N = self.N
        while len(self.sigmas) <= n_max:
            n = len(self.sigmas)
            zero = Series.from_polynomial([], self.work)
            K = n + 1 if below else n
            sig = self.sigmas + [zero] * (K + 1 - len(self.sigmas))
            rhs_series = -pvi_lambda_coefficient(sig, N, K)
            rows = min(_rows(rhs_series), len(self.coefs[0]))
            rhs = _dense(rhs_series, rows)
            seeds = {}
            if not below and n == 1:
                r = N + 2
                seeds[r] = -(N + 2) * leading_coefficient(3, N) / leading_coefficient(1, N)
            label = f"LambdaRecursion {self.branch.value} N={N} order {n}"
            u = _solve_linear(self.coefs, rhs, self._valuation(n), seeds, label)
            if len(u) <= self.order + 1:
                raise TruncationError(
                    f"[LambdaRecursion] lambda order {n} reached only t^{len(u) - 1}; raise the margin"
                )
            self.sigmas.append(Series(u, "t"))
            add_event("DEBUG", "sigma order solved", {"branch": self.branch.value, "N": N, "n": n, "terms": len(u)})

    def form_factors(self, n_max: int) -> List[Series]:
        """
        Form factors indexed by lambda^2 order: f^(2n) below Tc, f^(2n+1) above Tc (n = 0..n_max).

        Below Tc entries are series in t; above Tc they are ramified series in t^(1/2).
        """
        self.extend(n_max)
        N = self.N
        logs = [Series.from_polynomial([], self.work)] + [_log_from_sigma(s) for s in self.sigmas[1: n_max + 1]]
        G = _exp_lambda(logs) if n_max >= 1 else [Series.constant(1, self.work)]
        out = []
        if self.branch == Branch.BELOW:
            for n, g in enumerate(G):
                out.append(self._checked(2 * n, g.truncate(self.order)))
            return out
        g1 = f1_series(N, self.work)
        for n, h in enumerate(G):
            regular = g1 * h
            f = _ramified(regular, QQ(N, 2), self.order)
            out.append(self._checked(2 * n + 1, f))
        return out

    def _checked(self, j: int, f: Series) -> Series:
        if j == 0:
            return f
        exponent = f.leading_exponent()
        expected = leading_exponent(j, self.N)
        if exponent is None:
            if expected <= self.order:
                raise CalibrationError(f"[LambdaRecursion] f^({j})_{{{self.N}}} vanishes to t^{self.order}")
            return f
        if exponent != expected or f.leading_coefficient() != leading_coefficient(j, self.N):
            raise CalibrationError(
                f"[LambdaRecursion] f^({j}) for N={self.N} starts with {f.leading_coefficient()} t^{exponent},"
                f" expected {leading_coefficient(j, self.N)} t^{expected}"
            )
        return f


RECURSION_CACHE_SIZE = 16


@lru_cache(maxsize=RECURSION_CACHE_SIZE)
def _cached_recursion(branch: str, N: int, order: int, lambda_orders: int) -> LambdaRecursion:
    return LambdaRecursion(Branch(branch), N, order, lambda_orders)


def _recursion(branch: Branch, N: int, order: int, lambda_orders: int = 0) -> LambdaRecursion:
    branch = Branch(branch)
    return _cached_recursion(branch.value, N, order, max(lambda_orders, saturating_order(branch, N, order)))


def formfactor(req: FormFactorRequest) -> Series:
    """
    f^(j)_{N,N} to order t^T (times lambda^j when req.lam is given).

    Raises:
        CalibrationError: When the recursion disagrees with its oracles.
    """
    if req.j == 0:
        out = Series.constant(1, req.order)
    else:
        rec = _recursion(req.branch, req.N, req.order, req.j // 2)
        out = rec.form_factors(req.j // 2)[req.j // 2]
    if req.lam is not None:
        out = out.scale(parse_rational(req.lam) ** req.j)
    return out


def saturating_order(branch: Branch, N: int, order: int) -> int:
    """Largest lambda^2 index n whose form factor starts at or below t^order."""
    n = 0
    j = lambda k: 2 * k if Branch(branch) == Branch.BELOW else 2 * k + 1
    while leading_exponent(j(n + 1), N) <= order:
        n += 1
    return n


def sigma_corrections(branch: Branch, N: int, order: int) -> List[Series]:
    """sigma = sum_n lambda^(2n) sigma_n up to the saturating order; sigma_0 = 0 below Tc."""
    rec = _recursion(branch, N, order)
    rec.extend(saturating_order(branch, N, order))
    return list(rec.sigmas)


def lambda_correlation(branch: Branch, N: int, lam, order: int, lambda_orders: Optional[int] = None) -> Series:
    """
    C_-(N,N;lambda) = (1-t)^(1/4) (1 + sum_n lambda^(2n) f^(2n)) below Tc, and
    C_+(N,N;lambda) = (1-t)^(1/4) sum_n lambda^(2n) f^(2n+1) above Tc (ramified, so that
    lambda = 0 leaves the f^(1) term).

    Raises:
        TruncationError: If lambda_orders does not saturate t^order.
    """
    branch = Branch(branch)
    lam = parse_rational(lam) if isinstance(lam, str) else QQ.convert(lam)
    needed = saturating_order(branch, N, order)
    if lambda_orders is not None and lambda_orders < needed:
        raise TruncationError(
            f"[lambda_correlation] {lambda_orders} lambda orders leave t^{order} unsaturated; need {needed}"
        )
    prefactor = Series.from_polynomial([1, -1], order).pow_rational(QUARTER)
    if branch == Branch.BELOW:
        if not lam:
            return prefactor
        factors = _recursion(branch, N, order).form_factors(needed)
        total = factors[0]
        for n in range(1, needed + 1):
            total = total + factors[n].scale(lam ** (2 * n))
        return prefactor * total
    factors = _recursion(branch, N, order).form_factors(needed)
    total = factors[0]
    for n in range(1, needed + 1):
        total = total + factors[n].scale(lam ** (2 * n))
    return prefactor.ramify(2) * total

