"""
Núcleos numéricos compartidos
=============================

Cuantil y CDF de la normal estándar (scipy) y raíces reales de un polinomio
de grado ≤ 3 en forma cerrada con pulido de Newton.
"""

import logging
import math
from typing import List, Sequence

import numpy as np
from scipy.stats import norm

from .exceptions import DegeneratePolynomialException
from .models import CubicRealRoots
from ...shared.exceptions import ValidationException

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
DISCRIMINANT_TOL = 1e-12
MAX_POLISH_STEPS = 10


# ===========================================
# NORMAL ESTÁNDAR
# ===========================================

def normal_quantile(p: float) -> float:
    """
    Percentil p de la normal estándar (z_p)

    Raises:
        ValidationException: Si p no está en (0, 1)
    """
    if not (0.0 < p < 1.0):
        raise ValidationException("debe estar en el intervalo abierto (0, 1)", field="p", value=p)
    return float(norm.ppf(p))


def normal_cdf(z: float) -> float:
    """Φ(z)"""
    return float(norm.cdf(z))


def two_sided_z(confidence: float) -> float:
    """z_{1−α/2} para un nivel de confianza 1−α"""
    return normal_quantile(1.0 - (1.0 - confidence) / 2.0)


# ===========================================
# RAÍCES REALES DE GRADO ≤ 3
# ===========================================

def _evaluate(coefficients: Sequence[float], x: float) -> float:
    value = 0.0
    for c in coefficients:
        value = value * x + c
    return value


def _derivative(coefficients: Sequence[float], x: float) -> float:
    degree = len(coefficients) - 1
    value = 0.0
    for power, c in zip(range(degree, 0, -1), coefficients[:-1]):
        value = value * x + power * c
    return value


def _polish(coefficients: Sequence[float], x: float, tolerance: float) -> float:
    """Un paso de Newton; pasos extra solo si el residuo sigue fuera de tolerancia"""
    best, best_residual = x, abs(_evaluate(coefficients, x))
    for _ in range(MAX_POLISH_STEPS):
        slope = _derivative(coefficients, best)
        if slope == 0.0:
            break
        candidate = best - _evaluate(coefficients, best) / slope
        residual = abs(_evaluate(coefficients, candidate))
        if residual >= best_residual:
            break
        best, best_residual = candidate, residual
        if best_residual <= tolerance:
            break
    return best


def _quadratic_roots(a: float, b: float, c: float) -> List[float]:
    if a == 0.0:
        if b == 0.0:
            return []
        return [-c / b]
    discriminant = b * b - 4.0 * a * c
    if abs(discriminant) <= DISCRIMINANT_TOL * (b * b + abs(4.0 * a * c)):
        return [-b / (2.0 * a)]
    if discriminant < 0.0:
        return []
    q = -0.5 * (b + math.copysign(math.sqrt(discriminant), b))
    return [q / a, c / q]


def _depressed_cubic_roots(p: float, q: float) -> List[float]:
    """Raíces reales de t³ + p·t + q (Cardano / forma trigonométrica)"""
    if p == 0.0:
        return [float(np.cbrt(-q))]

    discriminant = p ** 3 / 27.0 + q * q / 4.0
    if abs(discriminant) <= DISCRIMINANT_TOL * (abs(p) ** 3 / 27.0 + q * q / 4.0):
        discriminant = 0.0

    if discriminant > 0.0:
        s = math.sqrt(discriminant)
        return [float(np.cbrt(-q / 2.0 + s) + np.cbrt(-q / 2.0 - s))]

    r = 3.0 * q / p
    if discriminant == 0.0:
        return [r, -r / 2.0]

    argument = min(1.0, max(-1.0, r / 2.0 * math.sqrt(-3.0 / p)))
    s = math.acos(argument) / 3.0
    t = 2.0 * math.sqrt(-p / 3.0)
    u = 2.0 * math.pi / 3.0
    return [t * math.cos(s - u * k) for k in range(3)]


def solve_cubic_real_roots(a3: float, a2: float, a1: float, a0: float) -> CubicRealRoots:
    """
    Raíces reales de a3·x³ + a2·x² + a1·x + a0

    Si a3 = 0 resuelve la cuadrática o la lineal. Cada raíz se pule con Newton
    y se verifica su residuo contra 1e-8·max(1, max|coeficiente|).

    Args:
        a3, a2, a1, a0: Coeficientes reales

    Returns:
        CubicRealRoots: Raíces en orden creciente (sin duplicados) y residuos

    Raises:
        DegeneratePolynomialException: Si todos los coeficientes son cero
    """
    original = [float(a3), float(a2), float(a1), float(a0)]
    scale = max(abs(c) for c in original)
    if scale == 0.0:
        raise DegeneratePolynomialException()

    coefficients = [c / scale for c in original]
    while coefficients and coefficients[0] == 0.0:
        coefficients.pop(0)

    degree = len(coefficients) - 1
    if degree == 0:
        return CubicRealRoots()
    if degree < 3:
        padded = [0.0] * (2 - degree) + coefficients
        candidates = _quadratic_roots(*padded)
    else:
        lead, b, c, d = coefficients
        b, c, d = b / lead, c / lead, d / lead
        p = c - b * b / 3.0
        q = d - b * c / 3.0 + 2.0 * b ** 3 / 27.0
        candidates = [t - b / 3.0 for t in _depressed_cubic_roots(p, q)]

    tolerance = RESIDUAL_TOL * max(1.0, scale)
    roots: List[float] = []
    residuals: List[float] = []
    for candidate in sorted(_polish(coefficients, x, tolerance / scale) for x in candidates):
        if roots and abs(candidate - roots[-1]) <= 1e-9 * max(1.0, abs(candidate)):
            continue
        residual = abs(_evaluate(original, candidate))
        if residual > tolerance:
            logger.warning(f"⚠️ [CUBIC] raíz {candidate:.6g} descartada, residuo {residual:.3g}")
            continue
        roots.append(candidate)
        residuals.append(residual)

    return CubicRealRoots(roots=roots, residuals=residuals)
