"""
Modelos del módulo de población
===============================

Reclamos, líneas y momentos poblacionales. Los montos se guardan en centavos
enteros; los momentos se exponen en dólares (float) calculados a partir de
sumas enteras exactas.
"""

from dataclasses import dataclass, fields
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, Field, ConfigDict, field_validator, model_validator


# ===========================================
# RECLAMOS Y LÍNEAS
# ===========================================

class LineItem(BaseModel):
    """Línea de un reclamo: monto reclamado X_ij y monto de error más probable X̃_ij"""
    model_config = ConfigDict(frozen=True)

    claimed_amount: int = Field(..., ge=0, description="Monto reclamado en centavos")
    probable_error_amount: int = Field(..., ge=0, description="Monto de error más probable en centavos")

    @model_validator(mode="after")
    def validate_error_amount(self):
        if self.probable_error_amount > self.claimed_amount:
            raise ValueError("probable_error_amount no puede exceder claimed_amount")
        return self


class Claim(BaseModel):
    """Reclamo de reembolso con sus líneas en orden"""
    model_config = ConfigDict(frozen=True)

    claim_id: str = Field(..., min_length=1, description="Identificador opaco del reclamo")
    lines: Tuple[LineItem, ...] = Field(..., min_length=1, description="Líneas del reclamo (b_i ≥ 1)")

    @model_validator(mode="after")
    def validate_total(self):
        if self.total <= 0:
            raise ValueError(f"el total del reclamo {self.claim_id} debe ser positivo")
        return self

    @property
    def total(self) -> int:
        """X_i en centavos"""
        return sum(line.claimed_amount for line in self.lines)

    @property
    def probable_error_total(self) -> int:
        """X̃_i en centavos"""
        return sum(line.probable_error_amount for line in self.lines)

    @property
    def line_error_square_sum(self) -> int:
        """Σ_j X̃_ij² en centavos²"""
        return sum(line.probable_error_amount ** 2 for line in self.lines)


class ClaimPopulation(BaseModel):
    """Marco de auditoría completo (N reclamos)"""
    model_config = ConfigDict(frozen=True)

    claims: Tuple[Claim, ...] = Field(..., min_length=1)

    @field_validator("claims")
    @classmethod
    def validate_unique_ids(cls, claims):
        seen = set()
        for claim in claims:
            if claim.claim_id in seen:
                raise ValueError(f"claim_id duplicado: {claim.claim_id}")
            seen.add(claim.claim_id)
        return claims

    @property
    def n_pop(self) -> int:
        return len(self.claims)

    @property
    def n_lines(self) -> int:
        return sum(len(claim.lines) for claim in self.claims)

    @property
    def has_partial_errors(self) -> bool:
        """True si alguna línea tiene X̃_ij < X_ij"""
        return any(
            line.probable_error_amount < line.claimed_amount
            for claim in self.claims for line in claim.lines
        )

    def totals_cents(self) -> np.ndarray:
        """Vector de X_i en centavos (int64)"""
        return np.array([claim.total for claim in self.claims], dtype=np.int64)

    def error_totals_cents(self) -> np.ndarray:
        """Vector de X̃_i en centavos (int64)"""
        return np.array([claim.probable_error_total for claim in self.claims], dtype=np.int64)

    def totals(self) -> np.ndarray:
        """Vector de X_i en dólares"""
        return self.totals_cents() / 100.0


# ===========================================
# MOMENTOS
# ===========================================

class PopulationMoments(BaseModel):
    """Momentos poblacionales (divisor N) en dólares"""
    model_config = ConfigDict(frozen=True)

    n_pop: int = Field(..., ge=1, description="N")
    mu_x: float = Field(..., description="μ_x")
    sigma2_x: float = Field(..., ge=0, description="σ_x² con divisor N")
    mu_x2: float = Field(..., ge=0, description="μ_x^(2) = (1/N)ΣX_i²")
    tau_x: float = Field(..., ge=0, description="τ_x = ΣX_i")
    tau_x2: float = Field(..., ge=0, description="τ_x^(2) = ΣX_i²")
    g1_skew: float = Field(0.0, description="G1; 0 cuando σ_x = 0")
    sum_xt_sq: float = Field(0.0, ge=0, description="ΣX̃_i²")
    sum_line_xt_sq: float = Field(0.0, ge=0, description="Σ_iΣ_j X̃_ij²")

    @property
    def sigma_x(self) -> float:
        return self.sigma2_x ** 0.5


class ValueGroup(BaseModel):
    """Grupo de reclamos con el mismo total X_(l)"""
    model_config = ConfigDict(frozen=True)

    distinct_value: float = Field(..., description="X_(l) en dólares")
    count: int = Field(..., ge=1, description="N_l")
    c_value: float = Field(..., description="c_(l) = X_(l)(X_(l) − μ_x − σ_x²/(2μ_x))")


class DistinctValueGroups(BaseModel):
    """Valores distintos de X_i en orden estrictamente creciente"""
    model_config = ConfigDict(frozen=True)

    groups: List[ValueGroup]

    @property
    def min_count(self) -> int:
        return min(group.count for group in self.groups)

    @property
    def n_distinct(self) -> int:
        return len(self.groups)


# ===========================================
# SUMAS DE POTENCIAS (ESTADÍSTICOS SUFICIENTES)
# ===========================================

@dataclass(frozen=True)
class PowerSums:
    """
    Sumas enteras exactas (centavos) sobre un conjunto de reclamos

    Son aditivas: la suma de un estrato es la diferencia de dos prefijos.
    s_i denota Σ_j X̃_ij².
    """
    n: int = 0
    sx: int = 0        # ΣX
    sx2: int = 0       # ΣX²
    sx3: int = 0       # ΣX³
    sxt: int = 0       # ΣX̃
    sxt2: int = 0      # ΣX̃²
    sxxt: int = 0      # ΣXX̃
    sx2xt: int = 0     # ΣX²X̃
    sxxt2: int = 0     # ΣXX̃²
    ss: int = 0        # Σs
    sxs: int = 0       # ΣXs

    @classmethod
    def of_claim(cls, claim: Claim) -> "PowerSums":
        x = claim.total
        xt = claim.probable_error_total
        s = claim.line_error_square_sum
        return cls(1, x, x * x, x ** 3, xt, xt * xt, x * xt, x * x * xt, x * xt * xt, s, x * s)

    @classmethod
    def from_row(cls, row) -> "PowerSums":
        return cls(*(int(value) for value in row))

    def as_row(self) -> List[int]:
        return [getattr(self, f.name) for f in fields(self)]

    def __add__(self, other: "PowerSums") -> "PowerSums":
        return PowerSums(*(a + b for a, b in zip(self.as_row(), other.as_row())))

    def __sub__(self, other: "PowerSums") -> "PowerSums":
        return PowerSums(*(a - b for a, b in zip(self.as_row(), other.as_row())))
