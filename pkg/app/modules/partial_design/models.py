"""
Modelos del diseño con errores parciales por línea
==================================================
"""

from typing import List, Optional

from pydantic import BaseModel, Field, ConfigDict


class LineItemModel(BaseModel):
    """Modelo de errores por línea: π por reclamo y π_L por línea (independientes)"""
    model_config = ConfigDict(frozen=True)

    pi: float = Field(..., ge=0.0, le=1.0, description="Tasa de error por reclamo π")
    pi_l: float = Field(..., ge=0.0, le=1.0, description="Tasa de error por línea π_L")


class SurfaceCoefficients(BaseModel):
    """
    Coeficientes de la superficie polinómica sobre [0,1]²

    s(π, π_L) = c1π + c2(1−π)π_L² + c3(1−π)π_L(1−π_L) + c4π²
                + c5π(1−π)π_L + c6(1−π)²π_L²
    """
    model_config = ConfigDict(frozen=True)

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    def evaluate(self, pi: float, pi_l: float) -> float:
        q = 1.0 - pi
        return (
            self.c1 * pi
            + self.c2 * q * pi_l ** 2
            + self.c3 * q * pi_l * (1.0 - pi_l)
            + self.c4 * pi ** 2
            + self.c5 * pi * q * pi_l
            + self.c6 * q ** 2 * pi_l ** 2
        )

    @property
    def scale(self) -> float:
        return max(abs(self.c1), abs(self.c2), abs(self.c3), abs(self.c4), abs(self.c5), abs(self.c6))


class PartialYCoefficients(SurfaceCoefficients):
    """c1..c6 de E(σ_y²) = h(π, π_L) en dólares²"""
    pass


class BoundaryMaximum(BaseModel):
    """Máximo de la superficie sobre un borde del cuadrado unitario"""
    model_config = ConfigDict(frozen=True)

    edge: str = Field(..., description="Borde: pi=0, pi=1, pi_l=0 o pi_l=1")
    value: float
    pi: float
    pi_l: float


class InteriorCandidate(BaseModel):
    """Punto estacionario candidato obtenido de la cúbica en π_L"""
    model_config = ConfigDict(frozen=True)

    pi_l: float
    pi: Optional[float] = None
    value: Optional[float] = None
    accepted: bool = False
    reason: str = ""


class SurfaceMaximum(BaseModel):
    """Máximo global de la superficie con su tabla de bordes y candidatos interiores"""
    model_config = ConfigDict(frozen=True)

    value: float
    pi: float
    pi_l: float
    argmaxes: List[tuple] = Field(default_factory=list)
    boundaries: List[BoundaryMaximum] = Field(default_factory=list)
    interior: List[InteriorCandidate] = Field(default_factory=list)
    cubic: List[float] = Field(default_factory=list, description="(a3, a2, a1, a0) de la cúbica en π_L")
    degenerate_cubic: bool = False
