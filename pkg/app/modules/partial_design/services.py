"""
Servicios del diseño con errores parciales por línea
====================================================

Coeficientes c1..c6 de E(σ_y²), evaluación de h(π, π_L), máximo conservador
y la forma simplificada para líneas todo-o-nada.
"""

import logging
from fractions import Fraction

from .models import PartialYCoefficients
from .surface import maximize_surface
from ..aon_design.models import VariancePrediction, VarianceKind
from ..aon_design.services import check_rate, clamp_variance
from ..population.models import ClaimPopulation, PopulationMoments, PowerSums
from ..population.services import compute_power_sums
from ..population.utils import CENTS_PER_DOLLAR
from ...shared.exceptions import ValidationException

logger = logging.getLogger(__name__)

SQUARED_CENTS = CENTS_PER_DOLLAR ** 2


def partial_y_from_sums(sums: PowerSums) -> PartialYCoefficients:
    """
    c1..c6 a partir de sumas de potencias exactas

    Las sumas cruzadas sobre pares i ≠ i′ usan ΣΣ A_iB_i′ = (ΣA)(ΣB) − ΣA_iB_i.
    """
    n = sums.n
    own = Fraction(1, n) - Fraction(1, n * n)
    cross = Fraction(-1, n * n)

    c1 = own * sums.sx2
    c2 = own * sums.sxt2
    c3 = own * sums.ss
    c4 = cross * (sums.sx * sums.sx - sums.sx2)
    c5 = cross * 2 * (sums.sx * sums.sxt - sums.sxxt)
    c6 = cross * (sums.sxt * sums.sxt - sums.sxt2)

    return PartialYCoefficients(
        c1=float(c1 / SQUARED_CENTS),
        c2=float(c2 / SQUARED_CENTS),
        c3=float(c3 / SQUARED_CENTS),
        c4=float(c4 / SQUARED_CENTS),
        c5=float(c5 / SQUARED_CENTS),
        c6=float(c6 / SQUARED_CENTS),
    )


def partial_y_coefficients(pop: ClaimPopulation) -> PartialYCoefficients:
    """
    Coeficientes de E(σ_y²) para la población

    Returns:
        PartialYCoefficients: c1, c2, c3 ≥ 0 y c4, c5, c6 ≤ 0 en dólares²
    """
    coef = partial_y_from_sums(compute_power_sums(pop))
    logger.debug(f"🧮 [PARTIAL] coeficientes c: {coef.model_dump()}")
    return coef


def expected_var_y(coef: PartialYCoefficients, pi: float, pi_l: float) -> VariancePrediction:
    """E(σ_y²) = h(π, π_L)"""
    pi = check_rate(pi, "pi")
    pi_l = check_rate(pi_l, "pi_l")
    return VariancePrediction(
        value=clamp_variance(coef.evaluate(pi, pi_l), coef.scale),
        at_pi=pi,
        at_pi_l=pi_l,
        kind=VarianceKind.PARTIAL_Y,
    )


def conservative_variance_partial(coef: PartialYCoefficients, m: PopulationMoments) -> VariancePrediction:
    """
    Máximo global de h(π, π_L) sobre [0,1]²

    Args:
        coef: Coeficientes c1..c6
        m: Momentos (h(1, π_L) debe coincidir con σ_x²)

    Returns:
        VariancePrediction: Valor máximo, argmax y en diagnostics la tabla de
        bordes, los candidatos interiores y la cúbica
    """
    edge_value = coef.c1 + coef.c4
    if abs(edge_value - m.sigma2_x) > 1e-9 * max(1.0, m.sigma2_x):
        logger.warning(f"⚠️ [PARTIAL] h(1, π_L)={edge_value:.6f} difiere de σ_x²={m.sigma2_x:.6f}")

    result = maximize_surface(coef, label="E(σ_y²)")
    return VariancePrediction(
        value=result.value,
        at_pi=result.pi,
        at_pi_l=result.pi_l,
        kind=VarianceKind.PARTIAL_Y,
        conservative=True,
        argmaxes=result.argmaxes,
        diagnostics={
            "boundaries": [b.model_dump() for b in result.boundaries],
            "interior": [c.model_dump() for c in result.interior],
            "cubic": result.cubic,
            "degenerate_cubic": result.degenerate_cubic,
            "sigma2_x": m.sigma2_x,
        },
    )


def expected_var_y_aon_lines(pop: ClaimPopulation, pi: float, pi_l: float) -> VariancePrediction:
    """
    E(σ_y²) cuando todas las líneas son todo-o-nada (X̃_ij = X_ij)

    Raises:
        ValidationException: Si alguna línea tiene X̃_ij < X_ij
    """
    pi = check_rate(pi, "pi")
    pi_l = check_rate(pi_l, "pi_l")
    if pop.has_partial_errors:
        raise ValidationException("la población tiene líneas con X̃_ij < X_ij", field="probable_error_amount")

    sums = compute_power_sums(pop)
    n = sums.n
    p, q, pl = Fraction(pi), Fraction(1) - Fraction(pi), Fraction(pi_l)
    own = (Fraction(1, n) - Fraction(1, n * n)) * (
        (p + q * pl * pl) * sums.sx2 + q * pl * (1 - pl) * sums.ss
    )
    cross = Fraction(1, n * n) * (p + q * pl) ** 2 * (sums.sx * sums.sx - sums.sx2)
    return VariancePrediction(
        value=clamp_variance(float((own - cross) / SQUARED_CENTS), float(Fraction(sums.sx2, n) / SQUARED_CENTS)),
        at_pi=pi,
        at_pi_l=pi_l,
        kind=VarianceKind.PARTIAL_Y,
        diagnostics={"formula": "aon_lines"},
    )
