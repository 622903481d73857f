"""
'suites/beukers.py': The order-four operator of the zeta(3) triple integral.

I_n(z) = int_[0,1]^3 (u(1-u) v(1-v) w(1-w))^n / ((1-uv)^(n+1) (z-uvw)^(n+1)) du dv dw.
In x = 1/z the function J(x) = I_n(1/x) = x^(n+1) int (...) (1 - x uvw)^(-(n+1))
is annihilated by L_n, which splits into four first-order factors with
rational solutions.
"""
import logging
from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from holonomy.exceptions import QuadratureError
from holonomy.operators.diffop import DiffOp, compose
from holonomy.operators.ratsols import factor_first_order_chain, rational_solutions
from holonomy.rings.poly import poly_coeffs
from holonomy.suites.schemas import BeukersCase, SuiteCell, SuiteReport
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.suites.beukers")

COARSE_POINTS = 60
FINE_POINTS = 90
QUADRATURE_TOLERANCE = 1e-7
ANNIHILATION_TOLERANCE = 1e-6
MAX_N = 6


def beukers_operator(n: int) -> DiffOp:
    """L_n in x = 1/z, monic in D_x."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"[beukers_operator] n={n} outside 0..{MAX_N}")
    m = n * (n + 1)
    return DiffOp.from_strings(
        [
            f"{m}*(({m + 1})*x + ({(n - 1) * (n + 2)}))/((x-1)**2*x**4)",
            f"(x**2 + {2 * m})/((x-1)**2*x**3)",
            f"(7*x**2 + ({m - 5})*x - {2 * m})/((x-1)**2*x**2)",
            "2*(3*x-1)/((x-1)*x)",
            "1",
        ],
        "x",
    )


def _nodes(points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre on [0, 1]."""
    s, w = np.polynomial.legendre.leggauss(points)
    return (s + 1) / 2, w / 2


def _clustered(points: int) -> Tuple[np.ndarray, np.ndarray]:
    """u = 1 - (1-s)^3 on [0, 1], which flattens the corner u = v = 1."""
    s, w = _nodes(points)
    return 1 - (1 - s) ** 3, w * 3 * (1 - s) ** 2


def _grid(n: int, points: int):
    """
    Weights times the (u, v, w) part of the integrand, and s = uvw, on the product grid.
    """
    u, wu = _clustered(points)
    w_, ww = _nodes(points)
    U = u[:, None, None]
    V = u[None, :, None]
    W = w_[None, None, :]
    weights = wu[:, None, None] * wu[None, :, None] * ww[None, None, :]
    body = (U * (1 - U) * V * (1 - V) * W * (1 - W)) ** n / (1 - U * V) ** (n + 1)
    return weights * body, U * V * W


def _rising(a: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= a + i
    return out


def _falling(a: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= a - i
    return out


def integral_derivatives(n: int, x: float, count: int, points: int) -> List[float]:
    """
    J(x), J'(x), ..., J^(count)(x) by differentiating under the integral sign.

    d^k/dx^k [x^(n+1) (1 - xs)^(-(n+1))]
        = sum_i C(k,i) (n+1)_(falling i) x^(n+1-i) (n+1)_(rising k-i) s^(k-i) (1-xs)^(-(n+1+k-i))
    """
    weighted, s = _grid(n, points)
    base = 1 - x * s
    out = []
    for k in range(count + 1):
        total = np.zeros_like(s)
        for i in range(k + 1):
            fall = _falling(n + 1, i)
            if not fall:
                continue
            total = total + comb(k, i) * fall * x ** (n + 1 - i) * _rising(n + 1, k - i) * s ** (k - i) * base ** (-(n + 1 + k - i))
        out.append(float(np.sum(weighted * total)))
    return out


def beukers_integral(n: int, z: float, points: int = FINE_POINTS) -> float:
    """I_n(z) for real z > 1."""
    if z <= 1:
        raise ValueError(f"[beukers_integral] z={z} must exceed 1")
    return integral_derivatives(n, 1.0 / z, 0, points)[0]


def _self_consistent(n: int, z: float) -> Tuple[float, float]:
    coarse = beukers_integral(n, z, COARSE_POINTS)
    fine = beukers_integral(n, z, FINE_POINTS)
    gap = abs(fine - coarse)
    if gap > QUADRATURE_TOLERANCE:
        raise QuadratureError(
            f"[beukers_case] I_{n}({z}): {COARSE_POINTS}- and {FINE_POINTS}-point rules differ by {gap:.3e}"
        )
    return fine, gap


def _coefficient_values(L: DiffOp, x: float) -> List[float]:
    values = []
    for c in L.coefficients:
        if not c:
            values.append(0.0)
            continue
        num = np.polynomial.polynomial.polyval(x, [float(a) for a in poly_coeffs(c.numer)])
        den = np.polynomial.polynomial.polyval(x, [float(a) for a in poly_coeffs(c.denom)])
        values.append(num / den)
    return values


def annihilation_residual(L: DiffOp, n: int, x: float, points: int = FINE_POINTS) -> float:
    """|sum a_i(x) J^(i)(x)| relative to the largest term."""
    derivs = integral_derivatives(n, x, L.order, points)
    terms = [a * d for a, d in zip(_coefficient_values(L, x), derivs)]
    scale = max(abs(t) for t in terms) or 1.0
    return abs(sum(terms)) / scale


def beukers_case(n: int, samples: Sequence[float] = (2.0, 3.0)) -> BeukersCase:
    """
    Factor L_n into first-order operators and test it on quadrature samples of I_n.

    Raises:
        QuadratureError: If the two quadrature refinements disagree beyond 1e-7.
    """
    L = beukers_operator(n)
    with timed_event("beukers case", {"n": n}) as ctx:
        chain = factor_first_order_chain(L)
        product = chain.factors[0]
        for f in chain.factors[1:]:
            product = compose(product, f)
        composes = product.monic() == L.monic()
        count = len(rational_solutions(L))
        values: Dict[str, float] = {}
        gaps = []
        residuals = []
        for z in samples:
            value, gap = _self_consistent(n, z)
            values[repr(float(z))] = value
            gaps.append(gap)
            residuals.append(annihilation_residual(L, n, 1.0 / z))
        ctx["factors"] = len(chain.factors)
    return BeukersCase(
        n=n,
        operator=L.to_dict(),
        factors=[f.to_dict() for f in chain.factors],
        complete=chain.complete,
        composes=composes,
        rational_solutions=count,
        samples=values,
        self_consistency=max(gaps) if gaps else None,
        annihilation=max(residuals) if residuals else None,
    )


def beukers_suite(ns: Iterable[int] = (1, 2, 3, 4), samples: Sequence[float] = (2.0,)) -> SuiteReport:
    cells = []
    for n in ns:
        case = beukers_case(n, samples)
        ok = (
            case.complete
            and case.composes
            and len(case.factors) == 4
            and (case.annihilation is None or case.annihilation < ANNIHILATION_TOLERANCE)
        )
        cells.append(SuiteCell.of(
            ok,
            {"n": n, "samples": [float(z) for z in samples]},
            factors=len(case.factors),
            composes=case.composes,
            self_consistency=case.self_consistency,
            annihilation=case.annihilation,
            samples=case.samples,
        ))
    zero = beukers_operator(0)
    count = len(rational_solutions(zero))
    cells.append(SuiteCell.of(count >= 1, {"n": 0}, rational_solutions=count))
    return SuiteReport(suite="beukers", cells=cells, tolerance=QUADRATURE_TOLERANCE)
