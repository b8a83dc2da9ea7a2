"""
Módulo Diseño de Razón - Selección de estimador y varianza σ_R²
"""

from .models import PreferenceMethod, PreferenceReport, PartialRCoefficients, RatioVarianceGap
from .services import (
    preference_probability,
    preference_probability_exact,
    roberts_ratio_variance,
    exact_ratio_variance_gap,
    zero_error_pi_bound,
    zero_error_fallback_variance,
    partial_r_from_sums,
    partial_r_coefficients,
    expected_var_r,
    conservative_variance_ratio,
    conservative_variance_ratio_aon,
)

__all__ = [
    "PreferenceMethod",
    "PreferenceReport",
    "PartialRCoefficients",
    "RatioVarianceGap",
    "preference_probability",
    "preference_probability_exact",
    "roberts_ratio_variance",
    "exact_ratio_variance_gap",
    "zero_error_pi_bound",
    "zero_error_fallback_variance",
    "partial_r_from_sums",
    "partial_r_coefficients",
    "expected_var_r",
    "conservative_variance_ratio",
    "conservative_variance_ratio_aon",
]
