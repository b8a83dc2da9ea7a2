"""
Maximización de superficies polinómicas sobre [0,1]²
====================================================

La familia s(π, π_L) cubre E(σ_y²) directamente y E(σ_R²) con el mapeo
(c1..c6) = (a1, a2, a3, −a1, a4, a5). El máximo se busca entre:

1. Puntos estacionarios interiores: raíces reales de la cúbica en π_L, con π
   despejado de ∂s/∂π_L = 0 y verificados por gradiente y Hessiana.
2. Los cuatro bordes, cada uno constante o cuadrático, en forma cerrada.
"""

import logging
from typing import List, Tuple

from .models import SurfaceCoefficients, BoundaryMaximum, InteriorCandidate, SurfaceMaximum
from ..aon_design.services import tied_argmaxes
from ..numerics.exceptions import DegeneratePolynomialException
from ..numerics.services import solve_cubic_real_roots

logger = logging.getLogger(__name__)

GRADIENT_TOL = 1e-6
HESSIAN_TOL = 1e-9

Candidate = Tuple[float, Tuple[float, float]]


def stationary_cubic(s: SurfaceCoefficients) -> Tuple[float, float, float, float]:
    """Coeficientes (a3, a2, a1, a0) de la cúbica en π_L de los puntos estacionarios"""
    c_star = s.c2 - s.c3 + s.c6
    a3 = -2.0 * s.c6 * (s.c2 - s.c3)
    a2 = 3.0 * s.c5 * (s.c2 - s.c3)
    a1 = -4.0 * c_star * s.c4 + s.c3 * s.c5 + s.c5 ** 2 - 2.0 * s.c1 * s.c6
    a0 = s.c1 * s.c5 - 2.0 * s.c3 * s.c4
    return a3, a2, a1, a0


def gradient(s: SurfaceCoefficients, pi: float, pi_l: float) -> Tuple[float, float]:
    """(∂s/∂π, ∂s/∂π_L)"""
    q = 1.0 - pi
    d_pi = (
        s.c1 - s.c2 * pi_l ** 2 - s.c3 * pi_l * (1.0 - pi_l) + 2.0 * s.c4 * pi
        + s.c5 * (1.0 - 2.0 * pi) * pi_l - 2.0 * s.c6 * q * pi_l ** 2
    )
    d_pi_l = q * (2.0 * s.c2 * pi_l + s.c3 * (1.0 - 2.0 * pi_l) + s.c5 * pi + 2.0 * s.c6 * q * pi_l)
    return d_pi, d_pi_l


def hessian(s: SurfaceCoefficients, pi: float, pi_l: float) -> Tuple[float, float, float]:
    """(s_ππ, s_LL, s_πL)"""
    q = 1.0 - pi
    h_pp = 2.0 * s.c4 - 2.0 * s.c5 * pi_l + 2.0 * s.c6 * pi_l ** 2
    h_ll = q * (2.0 * s.c2 - 2.0 * s.c3 + 2.0 * s.c6 * q)
    h_pl = (
        -2.0 * s.c2 * pi_l - s.c3 * (1.0 - 2.0 * pi_l)
        + s.c5 * (1.0 - 2.0 * pi) - 4.0 * s.c6 * q * pi_l
    )
    return h_pp, h_ll, h_pl


# ===========================================
# BORDES
# ===========================================

def _quadratic_candidates(a: float, b: float, c: float) -> List[Tuple[float, float]]:
    """(valor, x) de a·x² + b·x + c en x = 0, x = 1 y el vértice si es un máximo interior"""
    candidates = [(c, 0.0), (a + b + c, 1.0)]
    if a < 0.0:
        vertex = -b / (2.0 * a)
        if 0.0 < vertex < 1.0:
            candidates.append(((a * vertex + b) * vertex + c, vertex))
    return candidates


def boundary_candidates(s: SurfaceCoefficients) -> List[Tuple[str, List[Candidate]]]:
    """Candidatos de máximo por borde, en el orden pi=0, pi=1, pi_l=0, pi_l=1"""
    pi_zero = [(v, (0.0, x)) for v, x in _quadratic_candidates(s.c2 - s.c3 + s.c6, s.c3, 0.0)]
    pi_one = [(s.c1 + s.c4, (1.0, 0.0)), (s.c1 + s.c4, (1.0, 1.0))]
    pi_l_zero = [(v, (x, 0.0)) for v, x in _quadratic_candidates(s.c4, s.c1, 0.0)]
    pi_l_one = [
        (v, (x, 1.0))
        for v, x in _quadratic_candidates(
            s.c4 - s.c5 + s.c6, s.c1 - s.c2 + s.c5 - 2.0 * s.c6, s.c2 + s.c6
        )
    ]
    return [("pi=0", pi_zero), ("pi=1", pi_one), ("pi_l=0", pi_l_zero), ("pi_l=1", pi_l_one)]


def boundary_maxima(s: SurfaceCoefficients) -> List[BoundaryMaximum]:
    """Tabla de máximos por borde (empates hacia el argumento menor)"""
    table = []
    for edge, candidates in boundary_candidates(s):
        value, ties = tied_argmaxes(candidates)
        pi, pi_l = ties[0]
        table.append(BoundaryMaximum(edge=edge, value=value, pi=pi, pi_l=pi_l))
    return table


# ===========================================
# PUNTOS ESTACIONARIOS INTERIORES
# ===========================================

def interior_candidates(s: SurfaceCoefficients) -> Tuple[List[InteriorCandidate], Tuple[float, ...], bool]:
    """
    Candidatos interiores a partir de la cúbica en π_L

    Returns:
        Tuple: (candidatos aceptados y rechazados, coeficientes de la cúbica,
        True si la cúbica es idénticamente cero)
    """
    cubic = stationary_cubic(s)
    try:
        roots = solve_cubic_real_roots(*cubic).roots
    except DegeneratePolynomialException:
        logger.warning("⚠️ [SURFACE] cúbica idénticamente cero; solo se evalúan los bordes")
        return [], cubic, True

    scale = max(1.0, s.scale)
    results: List[InteriorCandidate] = []
    for pi_l in roots:
        if not (0.0 < pi_l < 1.0):
            results.append(InteriorCandidate(pi_l=pi_l, reason="π_L fuera de (0, 1)"))
            continue
        denominator = s.c5 - 2.0 * s.c6 * pi_l
        if denominator == 0.0:
            results.append(InteriorCandidate(pi_l=pi_l, reason="∂s/∂π_L no determina π"))
            continue
        pi = -(2.0 * (s.c2 - s.c3 + s.c6) * pi_l + s.c3) / denominator
        if not (0.0 < pi < 1.0):
            results.append(InteriorCandidate(pi_l=pi_l, pi=pi, reason="π fuera de (0, 1)"))
            continue

        d_pi, d_pi_l = gradient(s, pi, pi_l)
        if max(abs(d_pi), abs(d_pi_l)) > GRADIENT_TOL * scale:
            results.append(InteriorCandidate(pi_l=pi_l, pi=pi, reason="gradiente no nulo"))
            continue
        h_pp, h_ll, h_pl = hessian(s, pi, pi_l)
        tolerance = HESSIAN_TOL * scale
        if h_pp > tolerance or h_ll > tolerance or h_pp * h_ll - h_pl ** 2 < -tolerance * scale:
            results.append(InteriorCandidate(pi_l=pi_l, pi=pi, value=s.evaluate(pi, pi_l),
                                             reason="Hessiana no semidefinida negativa"))
            continue
        results.append(InteriorCandidate(pi_l=pi_l, pi=pi, value=s.evaluate(pi, pi_l), accepted=True))

    return results, cubic, False


def maximize_surface(s: SurfaceCoefficients, label: str = "surface") -> SurfaceMaximum:
    """
    Máximo global de s sobre [0,1]²

    Args:
        s: Coeficientes de la superficie
        label: Etiqueta para los logs

    Returns:
        SurfaceMaximum: Valor, argmax (empates hacia π menor), tabla de bordes y
        candidatos interiores
    """
    interior, cubic, degenerate = interior_candidates(s)
    candidates: List[Candidate] = []
    for _, edge_candidates in boundary_candidates(s):
        candidates.extend(edge_candidates)
    candidates.extend((c.value, (c.pi, c.pi_l)) for c in interior if c.accepted)

    value, ties = tied_argmaxes(candidates)
    pi, pi_l = ties[0]
    rejected = [c for c in interior if not c.accepted]
    for c in rejected:
        logger.debug(f"🔎 [SURFACE] {label}: candidato π_L={c.pi_l:.4f} descartado ({c.reason})")
    logger.info(f"🛡️ [SURFACE] {label}: máximo {value:.4f} en (π={pi:.4f}, π_L={pi_l:.4f})")

    return SurfaceMaximum(
        value=value,
        pi=pi,
        pi_l=pi_l,
        argmaxes=ties,
        boundaries=boundary_maxima(s),
        interior=interior,
        cubic=list(cubic),
        degenerate_cubic=degenerate,
    )
