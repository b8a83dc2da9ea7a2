"""
Módulo Monte Carlo - Realización de errores, cobertura y oráculo exhaustivo
"""

from .models import (
    RealizedPopulation,
    CoverageReport,
    OracleExpectations,
    VerificationRow,
    VerificationReport,
)
from .services import realize, simulate_estimation
from .oracle import oracle_expectations, random_mini_population, run_verification_suite

__all__ = [
    "RealizedPopulation",
    "CoverageReport",
    "OracleExpectations",
    "VerificationRow",
    "VerificationReport",
    "realize",
    "simulate_estimation",
    "oracle_expectations",
    "random_mini_population",
    "run_verification_suite",
]
