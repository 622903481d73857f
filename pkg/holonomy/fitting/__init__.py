"""'holonomy/fitting': Linear ODE guessing from series, exact, modular and floating point."""
from .float_scan import float_scan, scan_to_csv, stabilized_roots, white_noise
from .schemas import Ansatz, CellStatus, FitMethod, FitResult, Prefactor, ScanCell, ScanReport, StabilizedRoot
from .service import (
    DEFAULT_MARGIN,
    degree_scan,
    fit,
    lift_fit,
    minimal_operator,
    multi_prime_fit,
    prepare_series,
    system_rows,
    terms_required,
)

__all__ = [
    "float_scan", "scan_to_csv", "stabilized_roots", "white_noise", "Ansatz", "CellStatus", "FitMethod",
    "FitResult", "Prefactor", "ScanCell", "ScanReport", "StabilizedRoot", "DEFAULT_MARGIN", "degree_scan",
    "fit", "lift_fit", "minimal_operator", "multi_prime_fit", "prepare_series", "system_rows", "terms_required",
]
