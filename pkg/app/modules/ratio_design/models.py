"""
Modelos del diseño para el estimador de razón
=============================================
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, ConfigDict

from ..partial_design.models import SurfaceCoefficients


class PreferenceMethod(str, Enum):
    """Método con el que se calculó P(g(U) > 0)"""
    NORMAL_APPROX = "normal_approx"
    MONTE_CARLO = "monte_carlo"
    EXHAUSTIVE = "exhaustive"


class PreferenceReport(BaseModel):
    """Confianza en que el estimador de razón supere a la expansión simple"""
    model_config = ConfigDict(frozen=True)

    pi: float = Field(..., ge=0.0, le=1.0)
    prob_ratio_better: float = Field(..., ge=0.0, le=1.0, description="P(g(U) > 0)")
    mean_g: float = Field(..., description="E(g) = πσ_x²/2")
    var_g: float = Field(..., ge=0.0, description="Var(g) = π(1−π)Σc_i²/N²")
    method: PreferenceMethod
    mc_std_err: Optional[float] = None
    replicates: Optional[int] = None
    degenerate: bool = Field(False, description="π ∈ {0, 1} o σ_x² = 0: valor por límite")
    min_group_size: Optional[int] = Field(None, description="min N_l (diagnóstico de normalidad)")
    n_distinct: Optional[int] = Field(None, description="Número de valores distintos v")
    normal_reliable: Optional[bool] = None


class PartialRCoefficients(BaseModel):
    """a1..a5 de E(σ_R²) en dólares² y k_i por reclamo"""
    model_config = ConfigDict(frozen=True)

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    k: List[float] = Field(default_factory=list, description="k_i = −2X_i/τ_x + τ_x^(2)/τ_x²")

    def surface(self) -> SurfaceCoefficients:
        """Misma familia polinómica que h con (c1..c6) = (a1, a2, a3, −a1, a4, a5)"""
        return SurfaceCoefficients(c1=self.a1, c2=self.a2, c3=self.a3, c4=-self.a1, c5=self.a4, c6=self.a5)

    def evaluate(self, pi: float, pi_l: float) -> float:
        return self.surface().evaluate(pi, pi_l)


class RatioVarianceGap(BaseModel):
    """Comparación entre la fórmula de Roberts para σ_R² y su valor exacto todo-o-nada"""
    model_config = ConfigDict(frozen=True)

    pi: float
    printed: float = Field(..., description="Fórmula de Roberts")
    exact: float = Field(..., description="a1·π(1−π)")
    gap: float = Field(..., description="printed − exact")
    predicted_gap: float = Field(..., description="π(1−π)·G1·σ_x³/(N·μ_x)")
