"""
Modelos del diseño bajo errores todo-o-nada
===========================================

VariancePrediction y SampleSizePlan son compartidos por los módulos de
error parcial, razón y estratificación.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ConfigDict, field_validator

from ...shared.exceptions import ComputationException
from ...shared.schemas import Estimator


class VarianceKind(str, Enum):
    """Fórmula que produjo una predicción de varianza"""
    ROBERTS = "roberts"
    TOTAL = "total"
    PARTIAL_Y = "partial_y"
    ROBERTS_RATIO = "roberts_ratio"
    PARTIAL_R = "partial_r"


class AonModel(BaseModel):
    """Modelo generativo todo-o-nada: cada reclamo está en error con probabilidad π"""
    model_config = ConfigDict(frozen=True)

    pi: float = Field(..., ge=0.0, le=1.0, description="Tasa de error por reclamo π")


class VariancePrediction(BaseModel):
    """Varianza predicha (σ_y² o σ_R²) y el punto (π, π_L) donde se evaluó o maximizó"""
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Varianza en dólares²; nunca negativa")
    at_pi: float = Field(..., ge=0.0, le=1.0)
    at_pi_l: Optional[float] = Field(None, ge=0.0, le=1.0)
    kind: VarianceKind
    conservative: bool = False
    argmaxes: List[Tuple[float, Optional[float]]] = Field(
        default_factory=list, description="Todos los (π, π_L) que empatan con el máximo"
    )
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("value")
    @classmethod
    def non_negative(cls, v: float) -> float:
        if v < 0.0:
            raise ComputationException(f"varianza predicha negativa: {v!r}", details={"value": v})
        return v


class PiCritical(BaseModel):
    """Punto crítico de h(π) = E(σ̂²_(R,y))"""
    model_config = ConfigDict(frozen=True)

    value: Optional[float] = Field(None, description="π_crit exacto; None si el denominador es ≤ 0")
    interior: bool = Field(False, description="True si π_crit ∈ [0, 1]")
    degenerate: bool = Field(False, description="Sin punto crítico interior (denominador ≤ 0)")
    large_n_approx: Optional[float] = Field(None, description="Aproximación μ_x^(2)/(2μ_x²)")


class SampleSizePlan(BaseModel):
    """Tamaño de muestra para un margen de error objetivo"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    margin: float = Field(..., gt=0, description="Margen de error E en dólares")
    confidence: float = Field(..., gt=0.5, lt=1.0)
    estimator: Estimator
    variance: float = Field(..., ge=0, description="Varianza usada en la fórmula")
    variance_used: Optional[VariancePrediction] = None
    formula_value: float = Field(..., description="n antes de redondear y acotar a [2, N]")
    z: float
    census_required: bool = False
