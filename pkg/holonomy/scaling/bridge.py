"""
'scaling/bridge.py': Numeric bridges between the lattice limit and integral representations.

h(x) = (1/pi) int_1^inf e^(-xy) (y^2 - 1)^(-1/2) dy is the one-particle scaled form
factor; with y = cosh(theta) the endpoint singularity disappears.
"""
import logging
from typing import Callable, Dict, List, Sequence

import mpmath
import numpy as np
from numpy.polynomial import Chebyshev

from holonomy.exceptions import NoSolutionError, QuadratureError
from holonomy.rings.fields import parse_rational, to_mpf
from holonomy.scaling.limit import f2_summand
from holonomy.scaling.schemas import BridgeReport, QuadraticFit
from holonomy.suites.schemas import SuiteCell, SuiteReport
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.scaling.bridge")

BRIDGE_DPS = 30
QUAD_TOLERANCE = 1e-10
ODE_TOLERANCE = 1e-6
FLATNESS_TOLERANCE = 1e-3
FIT_TOLERANCE = 1e-5
CHEBYSHEV_POINTS = 80
SCALE_CANDIDATES = ("1/2", "1", "2")
DEFAULT_SAMPLES = (0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)
DEFAULT_FIT_SAMPLES = (0.8, 1.0, 1.2, 1.5, 1.8, 2.1, 2.5)


def _cutoff(x) -> mpmath.mpf:
    """theta beyond which e^(-x cosh theta) is below the working precision."""
    return mpmath.acosh(max(mpmath.mpf(2), (BRIDGE_DPS + 10) * mpmath.log(10) / x))


def _quad(f: Callable, *intervals):
    value, err = mpmath.quad(f, *intervals, error=True)
    if abs(err) > QUAD_TOLERANCE * max(abs(value), 1):
        raise QuadratureError(f"[quad] error estimate {mpmath.nstr(err, 3)} on value {mpmath.nstr(value, 10)}")
    return value


def h(x) -> mpmath.mpf:
    """(1/pi) int_0^inf e^(-x cosh theta) d theta for x > 0."""
    with mpmath.workdps(BRIDGE_DPS):
        x = to_mpf(x)
        if x <= 0:
            raise ValueError(f"[h] x={x} must be positive")
        top = _cutoff(x)
        return _quad(lambda th: mpmath.exp(-x * mpmath.cosh(th)), [0, top / 2, top]) / mpmath.pi


def ode_residual(samples: Sequence[float], points: int = CHEBYSHEV_POINTS) -> float:
    """
    Largest |x h'' + h' - x h| at the samples, derivatives taken from a Chebyshev
    interpolant of h on [min, max] of the samples.
    """
    lo, hi = float(min(samples)), float(max(samples))
    interp = Chebyshev.interpolate(np.vectorize(lambda v: float(h(v))), points - 1, domain=[lo, hi])
    d1 = interp.deriv()
    d2 = d1.deriv()
    xs = np.asarray(samples, dtype=float)
    return float(np.max(np.abs(xs * d2(xs) + d1(xs) - xs * interp(xs))))


def f1_lattice(N: int, t) -> mpmath.mpf:
    """f^(1)_{N,N}(t) = t^(N/2) (1/2)_N / N! 2F1(1/2, N + 1/2; N + 1; t)."""
    with mpmath.workdps(BRIDGE_DPS):
        t = to_mpf(t)
        pref = mpmath.rf(mpmath.mpf(1) / 2, N) / mpmath.factorial(N)
        return t ** (mpmath.mpf(N) / 2) * pref * mpmath.hyp2f1(0.5, N + 0.5, N + 1, t)


def flatness(values: Sequence) -> float:
    """Relative spread (max - min) / |mean|."""
    arr = [to_mpf(v) for v in values]
    mean = sum(arr) / len(arr)
    return float((max(arr) - min(arr)) / abs(mean))


def bessel_bridge(samples: Sequence[float] = DEFAULT_SAMPLES, N: int = 400) -> BridgeReport:
    """
    h on the samples, the Bessel-equation residual of h, and the flatness of
    f^(1)_N(1 - x/N) / h(c x) for every candidate c. The ratio drifts like x^2 / (4N),
    so flatness is measured on the extrapolation 2 r_(2N) - r_N; the spread of r_N
    itself is kept as raw_flatness.

    Raises:
        QuadratureError: If h does not converge.
        NoSolutionError: If no candidate c gives a flat ratio.
    """
    if not samples:
        raise ValueError("[bessel_bridge] no samples")
    samples = sorted(float(s) for s in samples)
    with timed_event("bessel bridge", {"samples": len(samples), "N": N}):
        values = [h(s) for s in samples]
        decreasing = all(v > 0 for v in values) and all(b < a for a, b in zip(values, values[1:]))
        residual = ode_residual(samples)
        spreads: Dict[str, float] = {}
        raw: Dict[str, float] = {}
        for c in SCALE_CANDIDATES:
            q = parse_rational(c)
            scale = mpmath.mpf(int(q.numerator)) / int(q.denominator)
            shape = [h(scale * s) for s in samples]
            coarse = [f1_lattice(N, 1 - mpmath.mpf(s) / N) / v for s, v in zip(samples, shape)]
            fine = [f1_lattice(2 * N, 1 - mpmath.mpf(s) / (2 * N)) / v for s, v in zip(samples, shape)]
            raw[c] = flatness(coarse)
            spreads[c] = flatness([2 * b - a for a, b in zip(coarse, fine)])
    admissible = [c for c in SCALE_CANDIDATES if spreads[c] < FLATNESS_TOLERANCE]
    logger.info(f"[bessel_bridge] ode residual {residual:.3e}, flatness {spreads}")
    if not admissible:
        raise NoSolutionError(f"[bessel_bridge] no rescaling among {SCALE_CANDIDATES} is flat: {spreads}")
    return BridgeReport(
        samples=samples,
        h_values=[float(v) for v in values],
        positive_decreasing=decreasing,
        ode_residual=residual,
        flatness=spreads,
        raw_flatness=raw,
        scale=min(admissible, key=lambda c: spreads[c]),
        N=N,
    )


def f2_integral(t) -> mpmath.mpf:
    """-(1/pi^2) int int e^(-t(c1 + c2)) sinh^2(th2) / (c1 + c2)^2, c_i = cosh(th_i), over [0, inf)^2."""
    with mpmath.workdps(BRIDGE_DPS):
        t = to_mpf(t)
        top = _cutoff(t)

        def f(a, b):
            c1, c2 = mpmath.cosh(a), mpmath.cosh(b)
            return mpmath.exp(-t * (c1 + c2)) * mpmath.sinh(b) ** 2 / (c1 + c2) ** 2

        return -_quad(f, [0, top / 2, top], [0, top / 2, top]) / mpmath.pi ** 2


def _apply_numeric(U, y: Callable, x) -> mpmath.mpf:
    """sum_i p_i(x) y^(i)(x) for the primitive form of U."""
    total = mpmath.mpf(0)
    for i, coeffs in enumerate(U.polynomial_coefficients()):
        if not coeffs:
            continue
        p = mpmath.polyval([mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in reversed(coeffs)], x)
        total += p * mpmath.diff(y, x, i)
    return total


def _bessel_products() -> Dict[str, Callable]:
    k0 = lambda v: mpmath.besselk(0, v / 2)
    i0 = lambda v: mpmath.besseli(0, v / 2)
    return {
        "U(K0^2)": lambda v: k0(v) ** 2,
        "U(K0 I0)": lambda v: k0(v) * i0(v),
        "U(I0^2)": lambda v: i0(v) ** 2,
    }


def f2_scaled_fit(samples: Sequence[float] = DEFAULT_FIT_SAMPLES) -> QuadraticFit:
    """
    Fit the two-particle scaled integral at t = x/2 on {1} and U applied to the
    products of K_0(x/2), I_0(x/2), U mapping Sym^2(B) into F_2^scal.

    Raises:
        ValueError: On an empty sample list.
        NoSolutionError: If the intertwiner from Sym^2(B) is not found.
    """
    if not samples:
        raise ValueError("[f2_scaled_fit] no samples")
    _, U = f2_summand()
    if U is None:
        raise NoSolutionError("[f2_scaled_fit] no intertwiner from Sym^2(B) into F_2^scal")
    basis = _bessel_products()
    labels = ["1"] + list(basis)
    rows: List[List[float]] = []
    rhs: List[float] = []
    with timed_event("f2 scaled fit", {"samples": len(samples)}):
        with mpmath.workdps(BRIDGE_DPS):
            for s in samples:
                x = to_mpf(s)
                rows.append([1.0] + [float(_apply_numeric(U, f, x)) for f in basis.values()])
                rhs.append(float(f2_integral(x / 2)))
    A = np.array(rows)
    b = np.array(rhs)
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    rel = float(np.linalg.norm(A @ coef - b) / np.linalg.norm(b))
    logger.info(f"[f2_scaled_fit] relative residual {rel:.3e}")
    return QuadraticFit(
        samples=[float(s) for s in samples],
        coefficients=dict(zip(labels, map(float, coef))),
        relative_residual=rel,
    )


def bridge_suite(samples: Sequence[float] = DEFAULT_SAMPLES, fit_samples: Sequence[float] = DEFAULT_FIT_SAMPLES) -> SuiteReport:
    cells = []
    try:
        rep = bessel_bridge(samples)
    except NoSolutionError as e:
        cells.append(SuiteCell.of(False, {"check": "rescaling"}, reason=str(e)))
    else:
        cells.append(SuiteCell.of(rep.positive_decreasing, {"check": "h positive decreasing"}))
        cells.append(SuiteCell.of(rep.ode_residual < ODE_TOLERANCE, {"check": "h Bessel residual"}, residual=rep.ode_residual))
        cells.append(SuiteCell.of(rep.scale == "1/2", {"check": "rescaling", "N": rep.N}, scale=rep.scale, flatness=rep.flatness))
    fit = f2_scaled_fit(fit_samples)
    cells.append(SuiteCell.of(
        fit.relative_residual < FIT_TOLERANCE, {"check": "f2 quadratic fit"},
        residual=fit.relative_residual, coefficients=fit.coefficients,
    ))
    return SuiteReport(suite="bridge", cells=cells, tolerance=ODE_TOLERANCE)
