"""
Modelos del módulo de estratificación
=====================================
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, ConfigDict

from ..population.models import PopulationMoments
from ...shared.schemas import Estimator


class AllocationMethod(str, Enum):
    """Regla de asignación de la muestra entre estratos"""
    NEYMAN = "neyman"
    PROPORTIONAL = "proportional"


class StratumSummary(BaseModel):
    """Un estrato [low, high) por total de reclamo"""
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    low: Optional[float] = Field(None, description="Límite inferior inclusivo en dólares (None: sin límite)")
    high: Optional[float] = Field(None, description="Límite superior exclusivo en dólares (None: sin límite)")
    n_pop: int = Field(..., ge=0, description="N_h")
    moments: Optional[PopulationMoments] = None
    predicted_variance: float = Field(..., ge=0.0, description="σ̂_h² predicha por el modelo de error")
    n_alloc: int = Field(0, ge=0, description="n_h")
    power_sums: List[int] = Field(default_factory=list, description="Sumas de potencias del estrato (centavos)")


class StratificationPlan(BaseModel):
    """Puntos de corte, estratos, asignación y varianza estratificada predicha"""
    model_config = ConfigDict(frozen=True)

    breakpoints: List[float] = Field(default_factory=list, description="Cortes crecientes en dólares")
    per_stratum: List[StratumSummary]
    estimator: Estimator
    allocation: AllocationMethod = AllocationMethod.NEYMAN
    n_total: int = Field(0, ge=0)
    total_variance: float = Field(0.0, ge=0.0, description="Varianza del total estimado (dólares²)")
    pi: Optional[float] = None
    pi_l: Optional[float] = None
    search: Optional[str] = Field(None, description="exhaustive, dp o None si los cortes fueron dados")
