"""
'operators/schemas.py': Report models for local analysis of operators.
"""
from collections import namedtuple
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class FactorSource(str, Enum):
    CATALOG = "catalog"
    MONOMIAL = "monomial"
    RATIONAL = "rational"
    QUADRATIC = "quadratic"
    IRREDUCIBLE = "irreducible"
    RESIDUAL = "residual"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class HeadFactor(BaseModel):
    """One factor of a head polynomial."""

    polynomial: List[str] = Field(..., description="Little-endian coefficients of the primitive factor")
    multiplicity: int = Field(..., ge=1, description="Power of the factor in the head polynomial")
    source: FactorSource = Field(..., description="How the factor was found")
    name: Optional[str] = Field(None, description="Catalog name when the factor is catalogued")
    classification: Optional[str] = Field(None, description="Root class, filled by the modular classifier")


class SingularPointReport(BaseModel):
    """
    Factorization of the head polynomial of an operator.

    content * prod(factor ** multiplicity) reproduces the head polynomial.
    """
    variable: str = Field(..., description="Operator variable")
    head: List[str] = Field(..., description="Head polynomial, little-endian")
    content: str = Field("1", description="Rational constant in front of the factor product")
    factors: List[HeadFactor] = Field(default_factory=list, description="Factors with multiplicities")

    def degrees(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for f in self.factors:
            d = len(f.polynomial) - 1
            out[d] = out.get(d, 0) + f.multiplicity
        return out


# polynomial: sympy Poly in rho (None when its coefficients are not rational);
# residual: irreducible factors of degree > 1 as strings.
IndicialData = namedtuple("IndicialData", ["polynomial", "exponents", "residual", "regular"])

ApparentCheck = namedtuple("ApparentCheck", ["apparent", "reason"])


class Obstruction(BaseModel):
    exponent: str = Field(..., description="Exponent whose log-free solution is blocked")
    step: int = Field(..., ge=0, description="Resonance index where the recurrence fails")
    value: str = Field(..., description="Obstruction constant (nonzero) or 'repeated'")


class FrobeniusBasis(BaseModel):
    """
    Log-free local solutions at a point.

    len(solutions) + len(obstructed) + unresolved equals the operator order.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    point: str = Field(..., description="Expansion point: rational, 'infinity' or a factor polynomial")
    exponents: List[str] = Field(default_factory=list, description="Rational exponents with multiplicity")
    solutions: Dict[str, Any] = Field(default_factory=dict, description="Exponent -> series or residue coefficients")
    obstructed: List[Obstruction] = Field(default_factory=list, description="Slots without a log-free solution")
    unresolved: int = Field(0, ge=0, description="Exponents that are not rational")
    order: int = Field(..., ge=0, description="Operator order")
