"""
'scaling/schemas.py': Models for the t = 1 - x/N limit and its numeric bridges.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ScaledFamily(BaseModel):
    """
    Lattice operators next to their scaled counterparts.

    Fields:
        lattice: ParamDiffOp in t, keyed by the index j.
        scaled: DiffOp in x, keyed by the index j.
        bessel: B = D^2 + D/x - 1/4.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lattice: Dict[int, Any] = Field(default_factory=dict)
    scaled: Dict[int, Any] = Field(default_factory=dict)
    bessel: Any


class BridgeReport(BaseModel):
    """
    Numeric comparison of the lattice limit with the integral representation h.

    Fields:
        samples: Sample points x.
        h_values: h at the samples.
        positive_decreasing: h > 0 and strictly decreasing on the samples.
        ode_residual: Largest |x h'' + h' - x h| on the samples from the Chebyshev interpolant.
        flatness: Rescaling factor c -> relative spread of the N, 2N extrapolated
            ratio f^(1)_N(1 - x/N) / h(c x).
        raw_flatness: The same spread for the ratio at N alone.
        scale: The admissible c with the flattest ratio.
        N: Lattice distance used for the ratio.
    """
    model_config = ConfigDict(frozen=True)

    samples: List[float]
    h_values: List[float]
    positive_decreasing: bool
    ode_residual: float
    flatness: Dict[str, float] = Field(default_factory=dict)
    raw_flatness: Dict[str, float] = Field(default_factory=dict)
    scale: Optional[str] = None
    N: int = Field(..., ge=1)


class QuadraticFit(BaseModel):
    """
    Least-squares fit of the two-particle scaled integral on 1 and U(Bessel products).

    Fields:
        samples: Sample points x (the field-theory variable is x/2).
        coefficients: Basis label -> fitted coefficient.
        relative_residual: ||A c - b|| / ||b||.
    """
    model_config = ConfigDict(frozen=True)

    samples: List[float]
    coefficients: Dict[str, float] = Field(default_factory=dict)
    relative_residual: float = Field(..., ge=0)
