"""
'fitting/schemas.py': Ansatz, fit result and float-scan report models.
"""
from enum import Enum
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from holonomy.exceptions import DomainMismatchError


class FitMethod(str, Enum):
    EXACT = "exact"
    MODULAR = "modular"
    LIFTED = "lifted"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


class CellStatus(str, Enum):
    OK = "ok"
    UNDERDETERMINED = "underdetermined"
    DEGENERATE = "degenerate"

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))


def _int_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _int_pow(a: Sequence[int], e: int) -> List[int]:
    out = [1]
    for _ in range(e):
        out = _int_mul(out, a)
    return out


class Prefactor(BaseModel):
    """
    A designated polynomial raised to a fixed power in each coefficient of the ansatz.

    Fields:
        polynomial: Integer coefficients, lowest degree first.
        exponents: Exponent of the polynomial in the coefficient of D^i, i = 0..q.
    """
    model_config = ConfigDict(frozen=True)

    polynomial: List[int] = Field(..., min_length=1, description="Little-endian integer coefficients")
    exponents: List[int] = Field(..., description="Exponent per derivative order")

    @model_validator(mode="after")
    def check_exponents(self):
        if any(e < 0 for e in self.exponents):
            raise ValueError("prefactor exponents must be nonnegative")
        return self


class Ansatz(BaseModel):
    """
    Shape of a sought operator sum_i z_i(var) p_i(var) D^i.

    z_i is the product of the prefactors at order i and p_i is unknown of degree <= degrees[i].

    Fields:
        order: Order q of the operator.
        degrees: Degree bound of each unknown p_i, i = 0..q.
        variable: Variable the operator is written in.
        prefactors: Fixed polynomial factors of the coefficients.
        z0: Known-singularity polynomial used by the structured pattern, for the record.
        substitution_scale: When set, a series in w is refitted in x = scale * w^2.
    """
    model_config = ConfigDict(frozen=True)

    order: int = Field(..., ge=1, description="Operator order q")
    degrees: List[int] = Field(..., description="Degree bound of p_i for i = 0..q")
    variable: Optional[str] = Field(None, description="Operator variable; the series variable when unset")
    prefactors: List[Prefactor] = Field(default_factory=list, description="Structural prefactors")
    z0: Optional[List[int]] = Field(None, description="Known-singularity polynomial")
    substitution_scale: Optional[int] = Field(None, description="x = scale * w^2 when set")

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.degrees) != self.order + 1:
            raise ValueError(f"need {self.order + 1} degree bounds, got {len(self.degrees)}")
        if any(d < 0 for d in self.degrees):
            raise ValueError("degree bounds must be nonnegative")
        for pre in self.prefactors:
            if len(pre.exponents) != self.order + 1:
                raise ValueError("prefactor exponents must cover every derivative order")
        return self

    @property
    def unknown_count(self) -> int:
        return sum(d + 1 for d in self.degrees)

    def prefactor(self, i: int) -> List[int]:
        """Dense integer product of the prefactors in the coefficient of D^i."""
        return reduce(_int_mul, (_int_pow(p.polynomial, p.exponents[i]) for p in self.prefactors), [1])

    def coefficient_degrees(self) -> List[int]:
        """Degree bound of each full coefficient z_i p_i."""
        return [len(self.prefactor(i)) - 1 + d for i, d in enumerate(self.degrees)]

    @classmethod
    def dense(cls, order: int, degree: int, variable: Optional[str] = None, substitution_scale: Optional[int] = None) -> "Ansatz":
        """Every coefficient a free polynomial of the same degree."""
        return cls(order=order, degrees=[degree] * (order + 1), variable=variable, substitution_scale=substitution_scale)

    @classmethod
    def fuchsian(
        cls,
        order: int,
        factors: Sequence[Tuple[Sequence[int], int]],
        head_degree: int,
        variable: Optional[str] = None,
        substitution_scale: Optional[int] = None,
    ) -> "Ansatz":
        """
        Ansatz of a Fuchsian operator whose head polynomial contains the given factors.

        A factor of head multiplicity m appears with exponent max(0, m - (q - i)) in the
        coefficient of D^i, and deg a_i <= head_degree - (q - i).

        Args:
            order: Operator order q.
            factors: (polynomial, multiplicity) pairs of the known head factors.
            head_degree: Degree of the head coefficient a_q.

        Raises:
            DomainMismatchError: If a coefficient bound falls below its prefactor degree.
        """
        prefactors = [
            Prefactor(polynomial=list(p), exponents=[max(0, m - (order - i)) for i in range(order + 1)])
            for p, m in factors
        ]
        degrees = []
        for i in range(order + 1):
            fixed = sum((len(p.polynomial) - 1) * p.exponents[i] for p in prefactors)
            d = head_degree - (order - i) - fixed
            if d < 0:
                raise DomainMismatchError(f"[Ansatz.fuchsian] head degree {head_degree} too small at D^{i}")
            degrees.append(d)
        return cls(
            order=order, degrees=degrees, variable=variable, prefactors=prefactors,
            substitution_scale=substitution_scale,
        )

    @classmethod
    def alpha_pattern(
        cls,
        order: int,
        designated: Sequence[Sequence[int]],
        z0: Sequence[int],
        degree: int,
        variable: Optional[str] = None,
        substitution_scale: Optional[int] = None,
    ) -> "Ansatz":
        """
        Structured mod-prime search pattern.

        Coefficient i carries P^alpha(i-1) for each designated P and z0^alpha(1+i-q),
        with alpha(n) = min(0, n). The whole operator is multiplied by the inverse of the
        smallest power of each polynomial, so every exponent is nonnegative: designated
        polynomials appear once from D^1 on, z0 to the power min(i, q-1).
        """
        def alpha(n):
            return min(0, n)

        def lifted(raw):
            low = min(raw)
            return [e - low for e in raw]

        prefactors = [
            Prefactor(polynomial=list(p), exponents=lifted([alpha(i - 1) for i in range(order + 1)]))
            for p in designated
        ]
        prefactors.append(
            Prefactor(polynomial=list(z0), exponents=lifted([alpha(1 + i - order) for i in range(order + 1)]))
        )
        return cls(
            order=order, degrees=[degree] * (order + 1), variable=variable, prefactors=prefactors,
            z0=list(z0), substitution_scale=substitution_scale,
        )


class FitResult(BaseModel):
    """
    Operators found by a fit.

    Fields:
        operators: Independent solutions, each primitive with positive head leading coefficient.
        prime: None for rational results, the prime for mod-p fits.
        method: exact, modular or lifted.
        terms: Series coefficients consumed.
        margin: Overdetermination margin of the system.
        unknowns: Number of unknown coefficients.
        primes_used: Primes that entered a lifted result.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operators: List[Any] = Field(..., description="DiffOp solutions")
    prime: Optional[int] = Field(None, description="Characteristic of the fit")
    method: FitMethod = Field(..., description="How the nullspace was obtained")
    terms: int = Field(..., description="Series terms consumed")
    margin: int = Field(..., description="Rows beyond the unknown count")
    unknowns: int = Field(..., description="Unknown coefficients")
    primes_used: List[int] = Field(default_factory=list, description="Primes behind a lifted result")

    def to_report(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "prime": self.prime,
            "terms": self.terms,
            "margin": self.margin,
            "unknowns": self.unknowns,
            "primes_used": self.primes_used,
            "operators": [op.to_dict() for op in self.operators],
        }


class ScanCell(BaseModel):
    """One (q, d) cell of a float scan."""
    model_config = ConfigDict(frozen=True)

    order: int = Field(..., description="Operator order q")
    degree: int = Field(..., description="Uniform degree d")
    status: CellStatus = Field(..., description="Outcome of the cell")
    residual: Optional[float] = Field(None, description="Relative least-squares residual")
    roots: List[Tuple[float, float]] = Field(default_factory=list, description="(real, imag) roots of the head polynomial")


class StabilizedRoot(BaseModel):
    """A head root that persists across consecutive scan cells."""
    model_config = ConfigDict(frozen=True)

    real: float = Field(..., description="Real part in the last cell of its run")
    imag: float = Field(0.0, description="Imaginary part in the last cell of its run")
    digits: int = Field(..., description="Leading digits agreeing along the run")
    cells: int = Field(..., description="Length of the run")

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)


class ScanReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    cells: List[ScanCell] = Field(default_factory=list)
    roots: List[StabilizedRoot] = Field(default_factory=list)

    def to_frame(self):
        """Root table as a pandas DataFrame (columns real, imag, digits, cells)."""
        return pd.DataFrame(
            [{"real": r.real, "imag": r.imag, "digits": r.digits, "cells": r.cells} for r in self.roots],
            columns=["real", "imag", "digits", "cells"],
        )
