"""'holonomy/rings': Exact arithmetic foundation."""
from .fields import QQ, crt, prime_field, rational_reconstruct, reduce_rational, parse_rational, format_rational
from .series import Series
from .trig import CosPoly, TrigSeries, fourier_coeff, trig_mode_scale, trig_mul
from .linalg import ExactMatrix, nullspace, nullspace_mod_p

__all__ = [
    "QQ", "crt", "prime_field", "rational_reconstruct", "reduce_rational", "parse_rational",
    "format_rational", "Series", "CosPoly", "TrigSeries", "fourier_coeff", "trig_mode_scale",
    "trig_mul", "ExactMatrix", "nullspace", "nullspace_mod_p",
]
