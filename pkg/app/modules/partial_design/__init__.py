"""
Módulo Diseño con Errores Parciales - Superficie E(σ_y²) = h(π, π_L)
"""

from .models import (
    LineItemModel,
    SurfaceCoefficients,
    PartialYCoefficients,
    BoundaryMaximum,
    InteriorCandidate,
    SurfaceMaximum,
)
from .services import (
    partial_y_from_sums,
    partial_y_coefficients,
    expected_var_y,
    conservative_variance_partial,
    expected_var_y_aon_lines,
)
from .surface import maximize_surface, boundary_maxima, stationary_cubic

__all__ = [
    "LineItemModel",
    "SurfaceCoefficients",
    "PartialYCoefficients",
    "BoundaryMaximum",
    "InteriorCandidate",
    "SurfaceMaximum",
    "partial_y_from_sums",
    "partial_y_coefficients",
    "expected_var_y",
    "conservative_variance_partial",
    "expected_var_y_aon_lines",
    "maximize_surface",
    "boundary_maxima",
    "stationary_cubic",
]
