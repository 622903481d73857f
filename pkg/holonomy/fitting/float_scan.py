"""
'fitting/float_scan.py': Floating-point singularity recognition on a grid of ansatz shapes.

Each (q, d) cell fits a dense operator to the series in the least-squares
sense: the unit vector of smallest residual of the row- and column-equilibrated
system, from a Householder R factor and inverse iteration, computed in extended
precision. The roots of the head polynomials are then matched across consecutive
cells; a root whose leading digits persist is reported.
"""
import logging
from typing import Iterable, List, Optional, Sequence

import mpmath
import numpy as np

from holonomy.fitting.schemas import CellStatus, ScanCell, ScanReport, StabilizedRoot
from holonomy.rings.fields import to_mpf
from holonomy.rings.series import Series
from holonomy.utils.events import timed_event

logger = logging.getLogger("holonomy.fitting.float_scan")

SCAN_DPS = 40
MIN_DIGITS = 2
MIN_CELLS = 3
MAX_DIGITS = 12
INVERSE_STEPS = 4


def _equilibrated(coeffs: List, q: int, d: int):
    """
    Row and column scaled system of the dense (q, d) ansatz and the column norms.

    Rows are scaled to unit maximum so that the growth of the coefficients does not
    hide the early conditions; the nullspace is unchanged. None when a column vanishes.
    """
    rows = len(coeffs) - q
    derivs = [[mpmath.ff(n + i, i) * coeffs[n + i] for n in range(rows)] for i in range(q + 1)]
    A = np.empty((rows, (q + 1) * (d + 1)), dtype=object)
    for i in range(q + 1):
        for k in range(d + 1):
            A[:, i * (d + 1) + k] = [derivs[i][m - k] if m >= k else mpmath.mpf(0) for m in range(rows)]
    for m in range(rows):
        top = max(abs(x) for x in A[m])
        if top:
            A[m] = A[m] / top
    norms = [mpmath.sqrt(mpmath.fsum(x * x for x in A[:, j])) for j in range(A.shape[1])]
    if any(n == 0 for n in norms):
        return None, norms
    for j, n in enumerate(norms):
        A[:, j] = A[:, j] / n
    return A, norms


def _triangular(A: np.ndarray) -> np.ndarray:
    """R of a Householder QR; wide systems are padded with zero rows first."""
    m, n = A.shape
    if m < n:
        A = np.vstack([A, np.full((n - m, n), mpmath.mpf(0), dtype=object)])
        m = n
    A = A.copy()
    for k in range(n):
        x = A[k:, k].copy()
        alpha = mpmath.sqrt(mpmath.fsum(v * v for v in x))
        if alpha == 0:
            continue
        if x[0] > 0:
            alpha = -alpha
        x[0] = x[0] - alpha
        size = mpmath.fsum(v * v for v in x)
        if size == 0:
            continue
        block = A[k:, k:]
        A[k:, k:] = block - np.outer(x, x.dot(block) * (2 / size))
    R = A[:n, :]
    for i in range(1, n):
        R[i, :i] = mpmath.mpf(0)
    return R


def _smallest_vector(R: np.ndarray, steps: int = INVERSE_STEPS):
    """Unit x minimizing |R x| by inverse iteration on R^T R; near-zero pivots are floored."""
    n = R.shape[0]
    scale = max(abs(R[i, i]) for i in range(n)) or mpmath.mpf(1)
    floor = scale * mpmath.mpf(10) ** (-mpmath.mp.dps)
    pivots = [R[i, i] if abs(R[i, i]) > floor else floor for i in range(n)]
    x = [mpmath.mpf(1)] * n
    for _ in range(steps):
        y = [mpmath.mpf(0)] * n
        for i in range(n):
            y[i] = (x[i] - mpmath.fsum(R[j, i] * y[j] for j in range(i))) / pivots[i]
        z = [mpmath.mpf(0)] * n
        for i in reversed(range(n)):
            z[i] = (y[i] - mpmath.fsum(R[i, j] * z[j] for j in range(i + 1, n))) / pivots[i]
        size = mpmath.sqrt(mpmath.fsum(v * v for v in z))
        x = [v / size for v in z]
    return x


def _cell(coeffs: List, q: int, d: int) -> ScanCell:
    """
    Least-squares operator of one dense (q, d) cell and the roots of its head.

    Cells with more unknowns than rows keep the unit vector of smallest residual
    and are marked underdetermined.
    """
    rows = len(coeffs) - q
    unknowns = (q + 1) * (d + 1)
    status = CellStatus.OK if unknowns <= rows else CellStatus.UNDERDETERMINED
    if rows < 1:
        return ScanCell(order=q, degree=d, status=CellStatus.UNDERDETERMINED)
    A, norms = _equilibrated(coeffs, q, d)
    if A is None:
        return ScanCell(order=q, degree=d, status=CellStatus.DEGENERATE)
    R = _triangular(A)
    x = _smallest_vector(R)
    total = mpmath.sqrt(mpmath.fsum(v * v for v in R.flat))
    residual = float(mpmath.sqrt(mpmath.fsum(v * v for v in R.dot(np.array(x, dtype=object)))) / total)
    solution = [x[c] / norms[c] for c in range(unknowns)]
    head = solution[q * (d + 1):]
    size = max(abs(h) for h in head)
    if size == 0:
        return ScanCell(order=q, degree=d, status=CellStatus.DEGENERATE, residual=residual)
    while head and abs(head[-1]) <= size * mpmath.mpf(10) ** (-(mpmath.mp.dps // 2)):
        head.pop()
    if len(head) < 2:
        return ScanCell(order=q, degree=d, status=CellStatus.DEGENERATE, residual=residual)
    try:
        roots = mpmath.polyroots(list(reversed(head)), maxsteps=400, extraprec=2 * mpmath.mp.dps)
    except mpmath.libmp.NoConvergence:
        return ScanCell(order=q, degree=d, status=CellStatus.DEGENERATE, residual=residual)
    pairs = sorted((float(mpmath.re(r)), float(mpmath.im(r))) for r in roots)
    return ScanCell(order=q, degree=d, status=status, residual=residual, roots=pairs)


def _digits(a: complex, b: complex) -> int:
    """Leading decimal digits on which two roots agree."""
    gap = abs(a - b)
    size = max(abs(a), abs(b), 1e-300)
    if gap == 0:
        return MAX_DIGITS
    return int(min(MAX_DIGITS, max(0.0, np.floor(-np.log10(gap / size)))))


def _nearest(root: complex, cell: ScanCell) -> Optional[complex]:
    candidates = [complex(*r) for r in cell.roots]
    if not candidates:
        return None
    return min(candidates, key=lambda c: abs(c - root))


def stabilized_roots(
    cells: Sequence[ScanCell], min_digits: int = MIN_DIGITS, min_cells: int = MIN_CELLS
) -> List[StabilizedRoot]:
    """
    Roots that agree to `min_digits` leading digits across `min_cells` consecutive usable cells.

    The run starting at each root is followed through nearest neighbours; the
    reported digit count is the weakest agreement along the run.
    """
    usable = [c for c in cells if c.status == CellStatus.OK]
    found: List[StabilizedRoot] = []
    for start in range(len(usable)):
        for r in usable[start].roots:
            current, digits, length = complex(*r), MAX_DIGITS, 1
            for nxt in usable[start + 1:]:
                match = _nearest(current, nxt)
                if match is None:
                    break
                agree = _digits(current, match)
                if agree < min_digits:
                    break
                current, digits, length = match, min(digits, agree), length + 1
            if length < min_cells:
                continue
            duplicate = next((f for f in found if _digits(f.value, current) >= min_digits), None)
            if duplicate is not None:
                if (length, digits) <= (duplicate.cells, duplicate.digits):
                    continue
                found.remove(duplicate)
            found.append(StabilizedRoot(real=current.real, imag=current.imag, digits=digits, cells=length))
    return sorted(found, key=lambda f: (abs(f.value), f.real, f.imag))


def float_scan(
    s: Series,
    orders: Iterable[int],
    degrees: Iterable[int],
    dps: int = SCAN_DPS,
    min_digits: int = MIN_DIGITS,
    min_cells: int = MIN_CELLS,
) -> ScanReport:
    """
    Scan the (q, d) grid in lexicographic order and collect the recognized singularities.

    Args:
        s: Series with rational or float coefficients.
        orders: Operator orders q.
        degrees: Uniform degrees d.

    Returns:
        ScanReport: Per-cell outcomes (underdetermined or degenerate cells included) and stabilized roots.
    """
    orders, degrees = sorted(set(orders)), sorted(set(degrees))
    if not orders or not degrees:
        raise ValueError("[float_scan] orders and degrees must be nonempty")
    cells = []
    with mpmath.workdps(dps), timed_event("float_scan", {"orders": orders, "degrees": degrees, "terms": len(s)}):
        coeffs = [to_mpf(c) for c in s.coefficients]
        for q in orders:
            for d in degrees:
                cell = _cell(coeffs, q, d)
                logger.debug(f"[float_scan] ({q}, {d}): {cell.status.value}, {len(cell.roots)} roots")
                cells.append(cell)
    roots = stabilized_roots(cells, min_digits, min_cells)
    logger.info(f"[float_scan] {len(roots)} stabilized roots over {len(cells)} cells")
    return ScanReport(cells=cells, roots=roots)


def scan_to_csv(report: ScanReport, path: str) -> None:
    report.to_frame().to_csv(path, index=False)


def white_noise(order: int, seed: int = 0, variable: str = "w") -> Series:
    """Random rational series without an underlying ODE, as a negative control."""
    rng = np.random.default_rng(seed)
    return Series([int(x) for x in rng.integers(-10 ** 6, 10 ** 6, size=order + 1)], variable)
