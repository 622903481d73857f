"""
'modular/schemas.py': Models for the modular-curve side.
"""
from enum import Enum
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Direction(str, Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class RootClass(str, Enum):
    NICKELIAN = "nickelian"
    CM = "cm"
    APPARENT = "apparent"
    PHYSICAL_OTHER = "physical-other"
    UNKNOWN = "unknown"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class CatalogEntry(BaseModel):
    name: str = Field(..., description="Display name of the polynomial")
    variable: str = Field("w", description="Variable the polynomial is written in")
    coefficients: List[int] = Field(..., description="Integer coefficients, little-endian")
    tags: List[str] = Field(default_factory=list, description="List memberships and CM markers")

    def cm_value(self) -> Optional[int]:
        for tag in self.tags:
            if tag.startswith("cm:"):
                return int(tag[3:])
        return None


class NomeResult(BaseModel):
    """
    Elliptic nome of a complex modulus.

    Fields:
        k: Modulus.
        K, Kp: K(k^2) and K(1 - k^2).
        q: exp(i pi tau).
        tau: Half-period ratio with Im tau > 0.
        canonical: tau reduced modulo tau -> tau + 1 and Re tau -> -Re tau.
        iterations: AGM steps for K and K'.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: Any
    K: Any
    Kp: Any
    q: Any
    tau: Any
    canonical: Any
    iterations: List[int] = Field(default_factory=list)

    def to_report(self) -> dict:
        return {name: str(getattr(self, name)) for name in ("k", "K", "Kp", "q", "tau", "canonical")}


class NickelianResult(BaseModel):
    order: int = Field(..., ge=1, description="m with u^(2m+1) = 1")
    roots: List[float] = Field(..., description="Distinct w values, sorted")
    polynomial: List[int] = Field(..., description="Primitive integer polynomial in w with these roots")
    factors: List[List[int]] = Field(
        default_factory=list, description="Irreducible factors over Q, the exact minimal polynomials of the roots"
    )
    witnesses: List[float] = Field(..., description="| |s| - 1 | for each root")


class ClassifiedRoot(BaseModel):
    """One head factor and the class of its roots."""

    factor: List[str] = Field(..., description="Factor polynomial, little-endian")
    name: Optional[str] = Field(None, description="Catalog name")
    root_class: RootClass = Field(..., description="Mutually exclusive root class")
    j: Optional[int] = Field(None, description="Exact j-invariant for CM roots")
    nickelian_order: Optional[int] = Field(None, description="Smallest m whose Nickelian set contains the roots")
    roots: List[str] = Field(default_factory=list, description="Numeric roots")
    provenance: str = Field("", description="Which test decided the class")
