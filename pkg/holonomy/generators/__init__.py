"""'holonomy/generators': Exact series for every fitted function family."""
from .formfactors import f1, f2_oracle, formfactor, lambda_correlation
from .hypergeometric import elliptic_EK, hypergeometric
from .integrals import phiD, phiH3_bruteforce, phiH_fourier, xy_of_phi
from .lattice import phiH_lattice
from .schemas import Branch, FormFactorRequest, ModeCoefficient, SeriesTarget
from .service import generate, get_generator, phiH

__all__ = [
    "f1", "f2_oracle", "formfactor", "lambda_correlation", "elliptic_EK", "hypergeometric", "phiD",
    "phiH", "phiH3_bruteforce", "phiH_fourier", "phiH_lattice", "xy_of_phi", "Branch",
    "FormFactorRequest", "ModeCoefficient", "SeriesTarget", "generate", "get_generator",
]
