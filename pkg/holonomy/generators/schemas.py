"""
'generators/schemas.py': Request and result models for the series generators.
"""
from collections import namedtuple
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Branch(str, Enum):
    BELOW = "below"
    ABOVE = "above"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class SeriesTarget(str, Enum):
    HYPERGEOMETRIC = "hypergeometric"
    ELLIPTIC_K = "K"
    ELLIPTIC_E = "E"
    PHI_H = "phiH"
    PHI_D = "phiD"
    FORMFACTOR = "formfactor"
    F2_ORACLE = "f2"
    CORRELATION = "correlation"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class FormFactorRequest(BaseModel):
    """
    Which form factor f^(j)_{N,N} to expand.

    Fields:
        branch: 'below' carries the even j, 'above' the odd j.
        j: Particle index.
        N: Diagonal distance.
        order: Truncation order in t.
        lam: Optional lambda as 'num/den' for lambda-extensions.
    """
    model_config = ConfigDict(frozen=True)

    branch: Branch = Field(..., description="Temperature branch")
    j: int = Field(..., ge=0, description="Particle index")
    N: int = Field(..., ge=0, description="Diagonal distance")
    order: int = Field(20, ge=0, description="Truncation order in t")
    lam: Optional[str] = Field(None, description="Lambda as 'num/den'")

    @model_validator(mode="after")
    def check_parity(self):
        even = self.j % 2 == 0
        if even != (self.branch == Branch.BELOW):
            raise ValueError(f"j={self.j} does not belong to the {self.branch.value} branch")
        return self


# Mode k coefficient of y*x^p, a series in w of valuation >= k + p.
ModeCoefficient = namedtuple("ModeCoefficient", ["k", "p", "value"])
