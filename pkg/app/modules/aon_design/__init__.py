"""
Módulo Diseño Todo-o-Nada - Varianza de Roberts, π_crit y tamaño de muestra
"""

from .models import AonModel, VariancePrediction, VarianceKind, PiCritical, SampleSizePlan
from .services import (
    roberts_variance,
    total_variance,
    expected_mean_y,
    pi_crit,
    conservative_variance_aon,
    sample_size,
    achieved_margin,
    clamp_variance,
)

__all__ = [
    "AonModel",
    "VariancePrediction",
    "VarianceKind",
    "PiCritical",
    "SampleSizePlan",
    "roberts_variance",
    "total_variance",
    "expected_mean_y",
    "pi_crit",
    "conservative_variance_aon",
    "sample_size",
    "achieved_margin",
    "clamp_variance",
]
