"""
Modelos del módulo de simulación y verificación
===============================================
"""

from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ConfigDict

from ..aon_design.models import AonModel
from ..partial_design.models import LineItemModel
from ..population.models import ClaimPopulation
from ...shared.schemas import Estimator

ErrorModel = Union[LineItemModel, AonModel]


class RealizedPopulation(BaseModel):
    """Población con montos en error Y_i generados por un modelo de error"""
    model_config = ConfigDict(frozen=True)

    base: ClaimPopulation
    y_cents: List[int] = Field(..., description="Y_i por reclamo en centavos")
    model: ErrorModel
    seed: int

    def y(self) -> np.ndarray:
        """Y_i en dólares"""
        return np.asarray(self.y_cents, dtype=np.float64) / 100.0

    @property
    def tau_y(self) -> float:
        return sum(self.y_cents) / 100.0

    @property
    def pi(self) -> float:
        return self.model.pi

    @property
    def pi_l(self) -> Optional[float]:
        return getattr(self.model, "pi_l", None)


class CoverageReport(BaseModel):
    """Cobertura observada de los intervalos de confianza en réplicas MAS"""
    model_config = ConfigDict(frozen=True)

    replicates: int = Field(..., ge=1)
    estimator: Estimator
    n: int
    pi: float
    pi_l: Optional[float] = None
    nominal: float
    attained: float = Field(..., ge=0.0, le=1.0)
    mean_margin: float = Field(..., description="Semiamplitud media del intervalo")
    rmse: float
    seed: int
    tau_y: float
    skew_g1_y: float = Field(0.0, description="G1 de los Y realizados")
    skew_flag: bool = Field(False, description="n < COVERAGE_SKEW_FACTOR·G1_y²")


class OracleExpectations(BaseModel):
    """Esperanzas exactas por enumeración de todos los vectores (U, W)"""
    model_config = ConfigDict(frozen=True)

    pi: float
    pi_l: float
    e_sigma_y2: float
    e_sigma_r2: float
    p_g_positive: float
    vectors: int


class VerificationRow(BaseModel):
    """Comparación fórmula cerrada contra oráculo en un punto (π, π_L)"""
    model_config = ConfigDict(frozen=True)

    population: int
    pi: float
    pi_l: float
    expected_var_y: float
    oracle_var_y: float
    expected_var_r: float
    oracle_var_r: float
    prob_exact: float
    oracle_prob: float


class VerificationReport(BaseModel):
    """Resumen de la suite de equivalencia con el oráculo"""
    model_config = ConfigDict(frozen=True)

    populations: int
    checks: int
    failures: List[str] = Field(default_factory=list)
    max_rel_error_y: float = 0.0
    max_rel_error_r: float = 0.0
    ratio_formula_findings: int = Field(0, description="Poblaciones con G1 ≠ 0 donde la fórmula de Roberts difiere del valor exacto")
    max_ratio_formula_gap: float = 0.0
    rows: List[VerificationRow] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures
