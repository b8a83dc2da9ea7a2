"""
Módulo Estratificación - Cortes óptimos por total de reclamo y asignación
"""

from .models import AllocationMethod, StratumSummary, StratificationPlan
from .services import (
    stratum_variance,
    stratified_variance,
    allocation_counts,
    allocate,
    build_plan,
    optimize_breakpoints,
)

__all__ = [
    "AllocationMethod",
    "StratumSummary",
    "StratificationPlan",
    "stratum_variance",
    "stratified_variance",
    "allocation_counts",
    "allocate",
    "build_plan",
    "optimize_breakpoints",
]
