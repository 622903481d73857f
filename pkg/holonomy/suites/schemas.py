"""
'suites/schemas.py': Report models shared by the verification suites.
"""
from enum import Enum
from typing import Any, Dict, List, Optional

import pandas as pd
import sympy
from pydantic import BaseModel, ConfigDict, Field

from holonomy.generators.schemas import Branch
from holonomy.rings.fields import QQ, format_rational
from holonomy.rings.series import Series


class CellStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class SuiteCell(BaseModel):
    """One independent check of a suite."""
    model_config = ConfigDict(frozen=True)

    params: Dict[str, Any] = Field(default_factory=dict, description="Inputs of the check")
    status: CellStatus = Field(..., description="pass or fail")
    witness: Dict[str, Any] = Field(default_factory=dict, description="Evidence behind the verdict")

    @classmethod
    def of(cls, passed: bool, params: Dict[str, Any], **witness) -> "SuiteCell":
        return cls(params=params, status=CellStatus.PASS if passed else CellStatus.FAIL, witness=witness)


class SuiteReport(BaseModel):
    """
    Outcome of a suite run.

    Fields:
        suite: Suite name as used on the command line.
        cells: Checks in canonical order.
        tolerance: Set only for numeric suites.
    """
    model_config = ConfigDict(frozen=True)

    suite: str = Field(..., description="Suite name")
    cells: List[SuiteCell] = Field(default_factory=list, description="Checks in canonical order")
    tolerance: Optional[float] = Field(None, description="Numeric tolerance, absent for exact suites")

    @property
    def passed(self) -> bool:
        return all(c.status == CellStatus.PASS for c in self.cells)

    def failures(self) -> List[SuiteCell]:
        return [c for c in self.cells if c.status == CellStatus.FAIL]

    def to_report(self) -> Dict[str, Any]:
        out = {"suite": self.suite, "cells": [c.model_dump(mode="json") for c in self.cells]}
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        return out

    def to_frame(self):
        """One row per cell; params and witness flattened with prefixes."""
        rows = []
        for c in self.cells:
            row = {f"param.{k}": v for k, v in c.params.items()}
            row["status"] = c.status.value
            row.update({f"witness.{k}": v for k, v in c.witness.items() if not isinstance(v, (list, dict))})
            rows.append(row)
        return pd.DataFrame(rows)


class PviResidual(BaseModel):
    """
    Sigma-form residual of a correlation series.

    Fields:
        N: Diagonal distance.
        branch: Temperature branch of the input.
        source: Where the input series came from.
        sigma: The sigma series built from the input.
        residual: Truncated residual series; zero for genuine correlations.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int = Field(..., ge=0)
    branch: Branch
    source: str = Field("series", description="Provenance of the input")
    sigma: Any = Field(..., description="Series")
    residual: Any = Field(..., description="Series")

    @property
    def vanishes(self) -> bool:
        return self.residual.is_zero()

    def first_nonzero(self) -> Optional[str]:
        """Leading exponent of a nonzero residual, None when it vanishes."""
        e = self.residual.leading_exponent()
        return None if e is None else format_rational(e)


class EKTerm(BaseModel):
    """p(t) E^e K^k with p given by integer coefficients, lowest degree first."""
    model_config = ConfigDict(frozen=True)

    e_power: int = Field(..., ge=0)
    k_power: int = Field(..., ge=0)
    numerator: List[int] = Field(..., description="Little-endian integer coefficients of p")


class EKExpression(BaseModel):
    """
    sum p_ab(t) E^a K^b / (c t^d (1-t)^e) with integer p_ab of content 1 and c > 0.

    Fields:
        terms: Nonzero monomials sorted by (total degree, E power).
        homogeneity: Bound h on a + b used by the search.
        denominator: The integer c.
        t_power, one_minus_t_power: d and e.
    """
    model_config = ConfigDict(frozen=True)

    terms: List[EKTerm] = Field(default_factory=list)
    homogeneity: int = Field(..., ge=0)
    denominator: int = Field(..., ge=1)
    t_power: int = Field(0, ge=0)
    one_minus_t_power: int = Field(0, ge=0)

    def evaluate(self, E: Series, K: Series) -> Series:
        """The expression with E and K replaced by series, as a series in the same variable."""
        order = E.order
        total = None
        for term in self.terms:
            p = Series.from_polynomial(term.numerator, order, E.variable)
            piece = p * (E ** term.e_power) * (K ** term.k_power)
            total = piece if total is None else total + piece
        if total is None:
            total = Series.from_polynomial([], order, E.variable)
        if self.one_minus_t_power:
            total = total * Series.from_polynomial([1, -1], order, E.variable).inverse() ** self.one_minus_t_power
        return total.mul_power(-self.t_power).scale(QQ(1, self.denominator))

    def to_text(self) -> str:
        t, E, K = sympy.symbols("t E K")
        numer = sum(
            (sum(c * t ** i for i, c in enumerate(term.numerator)) * E ** term.e_power * K ** term.k_power
             for term in self.terms),
            sympy.Integer(0),
        )
        den = self.denominator * t ** self.t_power * (1 - t) ** self.one_minus_t_power
        return f"({sympy.sstr(sympy.collect(sympy.expand(numer), [E, K]))}) / ({sympy.sstr(den)})"


class BeukersCase(BaseModel):
    """
    Factorization and quadrature data of the order-four zeta(3) operator at one n.

    Fields:
        n: Integer parameter.
        operator: L_n as operator JSON.
        factors: First-order factors, left to right, as operator JSON.
        complete: Every factor has order one.
        composes: The product of the factors equals L_n.
        rational_solutions: Rational solutions of L_n itself.
        samples: z -> I_n(z) at the finer quadrature rule.
        self_consistency: Largest gap between the two quadrature refinements.
        annihilation: Relative residual of L_n on the sampled integral (x = 1/z).
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    operator: Dict[str, Any]
    factors: List[Dict[str, Any]] = Field(default_factory=list)
    complete: bool = False
    composes: bool = False
    rational_solutions: int = 0
    samples: Dict[str, float] = Field(default_factory=dict)
    self_consistency: Optional[float] = None
    annihilation: Optional[float] = None


class ThetaCheck(BaseModel):
    """
    Numeric comparison of the lambda-extended correlation with a theta-function ratio.

    Fields:
        lam, t, order: Inputs.
        series_value: Truncated series at t.
        candidates: Nome convention -> absolute deviation.
        convention: Convention with the smallest deviation.
        deviation: That smallest deviation.
    """
    model_config = ConfigDict(frozen=True)

    lam: str
    t: str
    order: int = Field(..., ge=0)
    series_value: float
    candidates: Dict[str, float] = Field(default_factory=dict)
    convention: str
    deviation: float = Field(..., ge=0)


class SuiteName(str, Enum):
    PVI = "pvi"
    KW = "kw"
    EK = "ek"
    RUSSIAN_DOLL = "russian-doll"
    DIRECT_SUM = "direct-sum"
    INTERTWINERS = "intertwiners"
    THETA = "theta"
    BEUKERS = "beukers"
    SCALING = "scaling"
    BRIDGE = "bridge"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))
