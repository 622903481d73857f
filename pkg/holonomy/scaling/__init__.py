"""'holonomy/scaling': The t = 1 - x/N limit and its bridges to Bessel functions."""
from .bridge import bessel_bridge, f2_scaled_fit
from .limit import scale_limit, scaled_family, scaled_structure_report
from .schemas import BridgeReport, QuadraticFit, ScaledFamily

__all__ = [
    "bessel_bridge", "f2_scaled_fit", "scale_limit", "scaled_family", "scaled_structure_report",
    "BridgeReport", "QuadraticFit", "ScaledFamily",
]
