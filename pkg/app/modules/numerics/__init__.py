"""
Módulo Numérico - Cuantiles de la normal y raíces de cúbicas
"""

from .models import CubicRealRoots
from .services import normal_quantile, normal_cdf, two_sided_z, solve_cubic_real_roots
from .exceptions import DegeneratePolynomialException

__all__ = [
    "CubicRealRoots",
    "normal_quantile",
    "normal_cdf",
    "two_sided_z",
    "solve_cubic_real_roots",
    "DegeneratePolynomialException",
]
