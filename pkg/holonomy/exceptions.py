"""'holonomy/exceptions.py': Error hierarchy shared by every sub-package."""

ERROR_MESSAGES = {
    "variable": "Series or operators live in different variables",
    "ramification": "Series have incompatible ramification or shifts",
    "field": "Objects live over different coefficient fields",
    "terms": "Not enough series terms for the requested computation",
    "lambda_orders": "Not enough lambda orders to saturate the truncation",
    "reconstruction": "Rational reconstruction failed; more primes are needed",
    "shape": "Nullspace shapes differ between primes",
    "prime": "Prime rejected for this computation",
    "nullspace": "No solution of the requested shape",
    "calibration": "Lambda recursion disagrees with its oracle",
    "quadrature": "Numerical integration did not converge",
    "usage": "Invalid command line usage",
}


class HolonomyError(Exception):
    """Base class for holonomy errors."""

    label = "HolonomyError"

    def __init__(self, message: str, *, cause: Exception = None):
        super().__init__(message)
        self.message = message
        self.cause = cause

    def __str__(self):
        base = f"{self.label}: {self.message}"
        if self.cause:
            return f"{base} (caused by {repr(self.cause)})"
        return base


class DomainMismatchError(HolonomyError):
    label = "DomainMismatchError"


class TruncationError(HolonomyError):
    label = "TruncationError"


class ReconstructionError(HolonomyError):
    label = "ReconstructionError"


class BadPrimeError(HolonomyError):
    label = "BadPrimeError"


class NoSolutionError(HolonomyError):
    label = "NoSolutionError"


class CalibrationError(HolonomyError):
    label = "CalibrationError"


class QuadratureError(HolonomyError):
    label = "QuadratureError"


class UsageError(HolonomyError):
    label = "UsageError"
