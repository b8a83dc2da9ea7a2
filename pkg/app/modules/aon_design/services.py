"""
Servicios del diseño bajo errores todo-o-nada
=============================================

Varianza de Roberts, varianza total, π_crit, máximo conservador y la fórmula
de tamaño de muestra con corrección por población finita.
"""

import logging
import math
from typing import List, Tuple, Union

from .models import AonModel, VariancePrediction, VarianceKind, PiCritical, SampleSizePlan
from ..numerics.services import two_sided_z
from ..population.models import PopulationMoments
from ...config import settings
from ...shared.exceptions import ComputationException, ValidationException
from ...shared.schemas import Estimator

logger = logging.getLogger(__name__)


def check_rate(value: float, field: str) -> float:
    """Valida una tasa en [0, 1]"""
    if not (0.0 <= value <= 1.0):
        raise ValidationException("debe estar en [0, 1]", field=field, value=value)
    return float(value)


def tied_argmaxes(candidates: List[Tuple[float, tuple]]) -> Tuple[float, List[tuple]]:
    """
    Máximo de una lista (valor, argumento) con todos los argumentos empatados

    Los empates se deciden con tolerancia relativa settings.TIE_REL_TOL y se
    devuelven en orden creciente.
    """
    best = max(value for value, _ in candidates)
    tolerance = settings.TIE_REL_TOL * max(1.0, abs(best))
    ties = sorted({arg for value, arg in candidates if value >= best - tolerance})
    return best, ties


def clamp_variance(value: float, scale: float) -> float:
    """
    Lleva a 0 los negativos de redondeo de una varianza predicha

    Args:
        value: Varianza calculada
        scale: Magnitud de los términos que se restaron (p. ej. μ_x^(2))

    Returns:
        value, o 0.0 si es negativo dentro de settings.VARIANCE_REL_SLACK·max(1, |scale|)

    Raises:
        ComputationException: Negativo mayor que la holgura de redondeo
    """
    if value >= 0.0:
        return value
    slack = settings.VARIANCE_REL_SLACK * max(1.0, abs(scale))
    if value >= -slack:
        return 0.0
    raise ComputationException(
        f"varianza predicha negativa fuera de la holgura de redondeo: {value!r}",
        details={"value": value, "scale": scale, "slack": slack},
    )


# ===========================================
# PREDICCIONES DE VARIANZA
# ===========================================

def roberts_variance(m: PopulationMoments, pi: float) -> VariancePrediction:
    """
    E(σ̂²_(R,y)) bajo el modelo Bernoulli todo-o-nada

    Args:
        m: Momentos poblacionales
        pi: Tasa de error π

    Returns:
        VariancePrediction: πμ_x^(2) − (πμ_x)² − π(1−π)(σ_x²+μ_x²)/N
    """
    pi = check_rate(pi, "pi")
    value = (
        pi * m.mu_x2
        - (pi * m.mu_x) ** 2
        - pi * (1.0 - pi) * (m.sigma2_x + m.mu_x ** 2) / m.n_pop
    )
    value = clamp_variance(value, m.mu_x2)
    return VariancePrediction(value=value, at_pi=pi, kind=VarianceKind.ROBERTS)


def expected_mean_y(m: PopulationMoments, pi: float) -> float:
    """E(Y) = πμ_x"""
    return check_rate(pi, "pi") * m.mu_x


def total_variance(m: PopulationMoments, pi: float) -> VariancePrediction:
    """Var(Y) = πμ_x^(2) − (πμ_x)²; incluye E(Y) en diagnostics"""
    pi = check_rate(pi, "pi")
    value = pi * m.mu_x2 - (pi * m.mu_x) ** 2
    value = clamp_variance(value, m.mu_x2)
    return VariancePrediction(
        value=value,
        at_pi=pi,
        kind=VarianceKind.TOTAL,
        diagnostics={"expected_mean_y": expected_mean_y(m, pi)},
    )


def pi_crit(m: PopulationMoments) -> PiCritical:
    """
    Punto crítico exacto de h(π)

    π_crit = ½·(μ_x^(2) − μ_x^(2)/N) / (μ_x² − μ_x^(2)/N). Con denominador ≤ 0
    h no tiene máximo interior y se marca como degenerado.
    """
    approx = m.mu_x2 / (2.0 * m.mu_x ** 2) if m.mu_x > 0 else None
    denominator = m.mu_x ** 2 - m.mu_x2 / m.n_pop
    if denominator <= 0.0:
        logger.debug("🔎 [AON] π_crit sin punto crítico interior (denominador ≤ 0)")
        return PiCritical(value=None, interior=False, degenerate=True, large_n_approx=approx)

    value = 0.5 * (m.mu_x2 - m.mu_x2 / m.n_pop) / denominator
    return PiCritical(value=value, interior=0.0 <= value <= 1.0, large_n_approx=approx)


def conservative_variance_aon(m: PopulationMoments) -> VariancePrediction:
    """
    Máximo de h(π) sobre [0, 1]

    Candidatos: h(0) = 0, h(1) = σ_x² y h(π_crit) si π_crit es interior.
    """
    candidates = [(0.0, (0.0,)), (roberts_variance(m, 1.0).value, (1.0,))]
    critical = pi_crit(m)
    if critical.interior:
        candidates.append((roberts_variance(m, critical.value).value, (critical.value,)))

    best, ties = tied_argmaxes(candidates)
    logger.info(f"🛡️ [AON] varianza conservadora {best:.4f} en π={ties[0][0]:.4f}")
    return VariancePrediction(
        value=best,
        at_pi=ties[0][0],
        kind=VarianceKind.ROBERTS,
        conservative=True,
        argmaxes=[(arg[0], None) for arg in ties],
        diagnostics={"pi_crit": critical.value, "pi_crit_interior": critical.interior},
    )


# ===========================================
# TAMAÑO DE MUESTRA
# ===========================================

def achieved_margin(n_pop: int, variance: float, n: int, confidence: float) -> float:
    """z·sqrt(N²v/n·(N−n)/(N−1)); 0 para N = 1"""
    if n_pop <= 1:
        return 0.0
    z = two_sided_z(confidence)
    return z * math.sqrt(max(0.0, n_pop ** 2 * variance / n * (n_pop - n) / (n_pop - 1)))


def sample_size(
    m: PopulationMoments,
    variance: Union[float, VariancePrediction],
    margin: float,
    confidence: float,
    estimator: Estimator = Estimator.SIMPLE_EXPANSION,
) -> SampleSizePlan:
    """
    Tamaño de muestra para un margen de error E

    Args:
        m: Momentos poblacionales (aporta N)
        variance: σ_y² o σ_R² (valor o VariancePrediction)
        margin: Margen de error E en dólares
        confidence: Nivel de confianza 1−α en (0.5, 1)
        estimator: Estimador de expansión simple o de razón

    Returns:
        SampleSizePlan: n = ceil(z²N³v / (E²(N−1) + z²N²v)) acotado a [2, N]

    Raises:
        ValidationException: Margen ≤ 0, confianza fuera de (0.5, 1) o varianza negativa
    """
    if not margin > 0:
        raise ValidationException("debe ser positivo", field="margin", value=margin)
    if not (0.5 < confidence < 1.0):
        raise ValidationException("debe estar en (0.5, 1)", field="confidence", value=confidence)

    prediction = variance if isinstance(variance, VariancePrediction) else None
    v = prediction.value if prediction is not None else float(variance)
    if v < 0:
        raise ValidationException("no puede ser negativa", field="variance", value=v)

    n_pop = m.n_pop
    z = two_sided_z(confidence)
    numerator = z ** 2 * n_pop ** 3 * v
    denominator = margin ** 2 * (n_pop - 1) + z ** 2 * n_pop ** 2 * v
    formula_value = numerator / denominator if denominator > 0 else 0.0

    n = min(max(math.ceil(formula_value), settings.MIN_SAMPLE_SIZE), n_pop)
    census = n >= n_pop and formula_value > n_pop - 1
    if census:
        logger.warning(f"⚠️ [SAMPLE] el margen E={margin:,.2f} exige un censo (n = N = {n_pop})")

    logger.info(f"📐 [SAMPLE] {estimator.value}: n={n} (fórmula {formula_value:.3f}, v={v:.4f}, E={margin:,.2f})")
    return SampleSizePlan(
        n=n,
        margin=margin,
        confidence=confidence,
        estimator=estimator,
        variance=v,
        variance_used=prediction,
        formula_value=formula_value,
        z=z,
        census_required=census,
    )
