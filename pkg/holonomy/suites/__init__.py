"""'holonomy/suites': End-to-end checks of the form-factor identities."""
from .ek import fit_EK
from .pvi import kw_covariance_check, pvi_residual, sigma_from_correlation
from .schemas import BeukersCase, CellStatus, EKExpression, PviResidual, SuiteCell, SuiteName, SuiteReport, ThetaCheck
from .beukers import beukers_case
from .structure import direct_sum_report, russian_doll_report
from .theta import theta_ratio_check

__all__ = [
    "fit_EK", "kw_covariance_check", "pvi_residual", "sigma_from_correlation", "BeukersCase", "CellStatus",
    "EKExpression", "PviResidual", "SuiteCell", "SuiteName", "SuiteReport", "ThetaCheck", "beukers_case",
    "direct_sum_report", "russian_doll_report", "theta_ratio_check",
]
