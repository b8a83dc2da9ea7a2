"""
Servicios del diseño para el estimador de razón
===============================================

Probabilidad de que la razón supere a la expansión simple, varianza de
Roberts para σ_R², cota de cero errores y la superficie E(σ_R²) bajo errores
parciales por línea.
"""

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.stats import beta

from .models import PreferenceMethod, PreferenceReport, PartialRCoefficients, RatioVarianceGap
from ..aon_design.models import VariancePrediction, VarianceKind
from ..aon_design.services import check_rate, clamp_variance
from ..numerics.services import normal_cdf
from ..partial_design.surface import maximize_surface
from ..population.exceptions import ZeroMeanException
from ..population.models import ClaimPopulation, DistinctValueGroups, PopulationMoments, PowerSums
from ..population.services import compute_moments, compute_power_sums, distinct_value_groups
from ..population.utils import CENTS_PER_DOLLAR
from ...config import settings
from ...shared.exceptions import ValidationException
from ...shared.random import make_generator, map_blocks, STREAM_PREFERENCE

logger = logging.getLogger(__name__)

SQUARED_CENTS = CENTS_PER_DOLLAR ** 2
EXHAUSTIVE_CHUNK = 1 << 16


# ===========================================
# SELECCIÓN DE ESTIMADOR
# ===========================================

def preference_probability(groups: DistinctValueGroups, m: PopulationMoments, pi: float) -> PreferenceReport:
    """
    P(g(U) > 0) por aproximación normal

    g(U) = (1/N)Σc_iU_i con E(g) = πσ_x²/2 y Var(g) = π(1−π)Σc_i²/N².
    En π ∈ {0, 1} devuelve el límite (0.5 y 1) marcado como degenerado.

    Args:
        groups: Valores distintos con sus c_(l)
        m: Momentos poblacionales
        pi: Tasa de error π

    Returns:
        PreferenceReport con min N_l como diagnóstico de normalidad
    """
    pi = check_rate(pi, "pi")
    if m.mu_x <= 0:
        raise ZeroMeanException("μ_x debe ser positivo")

    n = m.n_pop
    mean_g = pi * m.sigma2_x / 2.0
    sum_c2 = sum(group.count * group.c_value ** 2 for group in groups.groups)
    var_g = pi * (1.0 - pi) * sum_c2 / n ** 2
    min_group = groups.min_count
    reliable = min_group >= settings.MIN_GROUP_SIZE_NORMAL

    degenerate = False
    if m.sigma2_x == 0.0:
        prob, degenerate = 0.5, True
    elif pi == 0.0:
        prob, degenerate = 0.5, True
    elif pi == 1.0:
        prob, degenerate = 1.0, True
    elif var_g == 0.0:
        prob = 1.0 if mean_g > 0 else 0.5
    else:
        prob = normal_cdf(mean_g / math.sqrt(var_g))

    if not reliable and not degenerate:
        logger.warning(
            f"⚠️ [PREFERENCE] min N_l={min_group} < {settings.MIN_GROUP_SIZE_NORMAL}: "
            f"la aproximación normal puede no ser confiable"
        )

    return PreferenceReport(
        pi=pi,
        prob_ratio_better=prob,
        mean_g=mean_g,
        var_g=var_g,
        method=PreferenceMethod.NORMAL_APPROX,
        degenerate=degenerate,
        min_group_size=min_group,
        n_distinct=groups.n_distinct,
        normal_reliable=reliable,
    )


def _claim_c_values(pop: ClaimPopulation, m: PopulationMoments) -> np.ndarray:
    x = pop.totals()
    return x * (x - m.mu_x - m.sigma2_x / (2.0 * m.mu_x))


def _exhaustive_preference(c: np.ndarray, pi: float, tie_tol: float) -> float:
    n = len(c)
    total = 1 << n
    bits = np.arange(n, dtype=np.int64)
    probability = 0.0
    for start in range(0, total, EXHAUSTIVE_CHUNK):
        codes = np.arange(start, min(start + EXHAUSTIVE_CHUNK, total), dtype=np.int64)
        u = ((codes[:, None] >> bits) & 1).astype(np.float64)
        g = u @ c / n
        k = u.sum(axis=1)
        weights = pi ** k * (1.0 - pi) ** (n - k)
        probability += float(weights[g > tie_tol].sum())
    return probability


def preference_probability_exact(
    pop: ClaimPopulation,
    pi: float,
    mode: PreferenceMethod = PreferenceMethod.EXHAUSTIVE,
    replicates: int = 10000,
    seed: int = 0,
    workers: int = 1,
) -> PreferenceReport:
    """
    P(g(U) > 0) exacta por enumeración o estimada por Monte Carlo

    Args:
        pop: Población
        pi: Tasa de error π
        mode: EXHAUSTIVE (N ≤ settings.EXHAUSTIVE_MAX_N) o MONTE_CARLO
        replicates: Réplicas Monte Carlo
        seed: Semilla del flujo Philox
        workers: Hilos para Monte Carlo (el resultado no depende de este valor)

    Raises:
        ValidationException: Enumeración pedida para N demasiado grande
    """
    pi = check_rate(pi, "pi")
    m = compute_moments(pop)
    if m.mu_x <= 0:
        raise ZeroMeanException("μ_x debe ser positivo")

    c = _claim_c_values(pop, m)
    n = m.n_pop
    tie_tol = 1e-12 * float(np.abs(c).sum()) / n
    mean_g = pi * m.sigma2_x / 2.0
    var_g = pi * (1.0 - pi) * float((c ** 2).sum()) / n ** 2

    if mode == PreferenceMethod.EXHAUSTIVE:
        if n > settings.EXHAUSTIVE_MAX_N:
            raise ValidationException(
                f"la enumeración exhaustiva admite N ≤ {settings.EXHAUSTIVE_MAX_N}", field="mode", value=n
            )
        prob = _exhaustive_preference(c, pi, tie_tol)
        return PreferenceReport(
            pi=pi, prob_ratio_better=min(1.0, max(0.0, prob)), mean_g=mean_g, var_g=var_g,
            method=PreferenceMethod.EXHAUSTIVE,
        )

    if replicates < 1:
        raise ValidationException("debe ser al menos 1", field="replicates", value=replicates)

    groups = distinct_value_groups(pop, m)
    counts = np.array([group.count for group in groups.groups], dtype=np.int64)
    c_groups = np.array([group.c_value for group in groups.groups])
    group_tol = 1e-12 * float(np.abs(c_groups * counts).sum()) / n

    def run_block(block: int, start: int, end: int) -> int:
        rng = make_generator(seed, STREAM_PREFERENCE, block)
        errors = rng.binomial(counts, pi, size=(end - start, len(counts)))
        g = errors @ c_groups / n
        return int((g > group_tol).sum())

    positives = sum(map_blocks(run_block, replicates, settings.MC_BLOCK_SIZE, workers))
    prob = positives / replicates
    std_err = math.sqrt(prob * (1.0 - prob) / replicates)
    logger.info(f"🎲 [PREFERENCE] Monte Carlo π={pi:.3f}: {prob:.5f} ± {std_err:.5f} ({replicates} réplicas)")
    return PreferenceReport(
        pi=pi, prob_ratio_better=prob, mean_g=mean_g, var_g=var_g,
        method=PreferenceMethod.MONTE_CARLO, mc_std_err=std_err, replicates=replicates,
        min_group_size=groups.min_count, n_distinct=groups.n_distinct,
    )


# ===========================================
# σ_R² BAJO ERRORES TODO-O-NADA
# ===========================================

def _roberts_ratio_factor(m: PopulationMoments) -> float:
    """μ_x^(2)·[1 + (1/N)(σ²/μ² + 4/(1+σ²/μ²) − G1/((μ/σ)(1+μ²/σ²)) − 5)]"""
    if m.mu_x <= 0:
        raise ZeroMeanException("μ_x debe ser positivo")
    cv2 = m.sigma2_x / m.mu_x ** 2
    skew_term = 0.0
    if m.sigma2_x > 0:
        skew_term = m.g1_skew * m.sigma_x ** 3 / (m.mu_x * m.mu_x2)
    bracket = cv2 + 4.0 / (1.0 + cv2) - skew_term - 5.0
    return m.mu_x2 * (1.0 + bracket / m.n_pop)


def roberts_ratio_variance(m: PopulationMoments, pi: float) -> VariancePrediction:
    """
    E(σ_R² | π) de Roberts bajo errores todo-o-nada

    Returns:
        VariancePrediction con la forma de N grande π(1−π)μ_x^(2) en diagnostics
    """
    pi = check_rate(pi, "pi")
    value = clamp_variance(pi * (1.0 - pi) * _roberts_ratio_factor(m), m.mu_x2)
    return VariancePrediction(
        value=value,
        at_pi=pi,
        kind=VarianceKind.ROBERTS_RATIO,
        diagnostics={"large_n": pi * (1.0 - pi) * m.mu_x2, "g1_skew": m.g1_skew},
    )


def exact_ratio_variance_gap(m: PopulationMoments, pi: float) -> RatioVarianceGap:
    """
    Diferencia entre la fórmula de Roberts y la esperanza exacta a1·π(1−π)

    La diferencia es π(1−π)·G1·σ_x³/(N·μ_x); se anula solo con G1 = 0.
    """
    pi = check_rate(pi, "pi")
    printed = pi * (1.0 - pi) * _roberts_ratio_factor(m)
    skew = m.g1_skew * m.sigma_x ** 3 / m.mu_x if m.sigma2_x > 0 else 0.0
    exact_a1 = m.mu_x2 + (m.mu_x2 ** 2 / m.mu_x ** 2 - 6.0 * m.sigma2_x - 2.0 * m.mu_x ** 2 - 2.0 * skew) / m.n_pop
    exact = pi * (1.0 - pi) * exact_a1
    return RatioVarianceGap(
        pi=pi,
        printed=printed,
        exact=exact,
        gap=printed - exact,
        predicted_gap=pi * (1.0 - pi) * skew / m.n_pop,
    )


def zero_error_pi_bound(n: int, confidence: float) -> float:
    """
    Cota binomial exacta unilateral para π cuando la muestra no tiene errores

    b = 1 − (1 − confianza)^(1/n), el cuantil de Beta(1, n).
    """
    if n < 1:
        raise ValidationException("debe ser al menos 1", field="n", value=n)
    if not (0.5 < confidence < 1.0):
        raise ValidationException("debe estar en (0.5, 1)", field="confidence", value=confidence)
    return float(beta.ppf(confidence, 1, n))


def zero_error_fallback_variance(m: PopulationMoments, n: int, confidence: float) -> VariancePrediction:
    """σ_R² de Roberts evaluada en la cota de cero errores"""
    bound = zero_error_pi_bound(n, confidence)
    prediction = roberts_ratio_variance(m, bound)
    logger.info(f"🧯 [RATIO] muestra sin errores (n={n}): π={bound:.5f}, σ_R²={prediction.value:.4f}")
    return prediction.model_copy(update={"diagnostics": {**prediction.diagnostics, "zero_error_bound": bound}})


# ===========================================
# σ_R² BAJO ERRORES PARCIALES
# ===========================================

def partial_r_from_sums(sums: PowerSums) -> PartialRCoefficients:
    """
    a1..a5 a partir de sumas de potencias exactas (sin el vector k)

    Con k_i = −2X_i/τ + τ2/τ², cada Σk_i·f_i es una combinación de sumas de
    potencias, y los pares i ≠ i′ salen de (ΣA)(ΣB) − ΣA_iB_i.
    """
    if sums.sx <= 0:
        raise ZeroMeanException("τ_x debe ser positivo")

    n = sums.n
    tau, tau2, t_err = sums.sx, sums.sx2, sums.sxt
    lead = Fraction(-2, tau)
    tail = Fraction(tau2, tau * tau)

    def k_weighted(sum_with_x: int, plain_sum: int) -> Fraction:
        """Σk_i·f_i dado Σx_i·f_i y Σf_i"""
        return lead * sum_with_x + tail * plain_sum

    k_x2 = k_weighted(sums.sx3, sums.sx2)
    k_xt2 = k_weighted(sums.sxxt2, sums.sxt2)
    k_s = k_weighted(sums.sxs, sums.ss)
    k_xt = k_weighted(sums.sxxt, t_err)
    k_x = k_weighted(sums.sx2, sums.sx)
    k_x_xt = k_weighted(sums.sx2xt, sums.sxxt)

    a1 = (sums.sx2 + k_x2) / n
    a2 = (sums.sxt2 + k_xt2) / n
    a3 = (sums.ss + k_s) / n
    a4 = (tau * k_xt + t_err * k_x - 2 * k_x_xt) / n
    a5 = (t_err * k_xt - k_xt2) / n

    return PartialRCoefficients(
        a1=float(Fraction(a1) / SQUARED_CENTS),
        a2=float(Fraction(a2) / SQUARED_CENTS),
        a3=float(Fraction(a3) / SQUARED_CENTS),
        a4=float(Fraction(a4) / SQUARED_CENTS),
        a5=float(Fraction(a5) / SQUARED_CENTS),
    )


def partial_r_coefficients(pop: ClaimPopulation) -> PartialRCoefficients:
    """
    Coeficientes a1..a5 de E(σ_R²) y el vector k_i

    Returns:
        PartialRCoefficients en dólares²
    """
    sums = compute_power_sums(pop)
    coef = partial_r_from_sums(sums)
    tail = Fraction(sums.sx2, sums.sx * sums.sx)
    k = [float(Fraction(-2 * claim.total, sums.sx) + tail) for claim in pop.claims]
    return coef.model_copy(update={"k": k})


def expected_var_r(coef: PartialRCoefficients, pi: float, pi_l: float) -> VariancePrediction:
    """E(σ_R²) = a1π(1−π) + a2(1−π)π_L² + a3(1−π)π_L(1−π_L) + a4π(1−π)π_L + a5(1−π)²π_L²"""
    pi = check_rate(pi, "pi")
    pi_l = check_rate(pi_l, "pi_l")
    return VariancePrediction(
        value=clamp_variance(coef.evaluate(pi, pi_l), coef.surface().scale),
        at_pi=pi,
        at_pi_l=pi_l,
        kind=VarianceKind.PARTIAL_R,
    )


def conservative_variance_ratio(coef: PartialRCoefficients) -> VariancePrediction:
    """
    Máximo global de E(σ_R²) sobre [0,1]²

    El borde π = 1 vale 0; los demás se maximizan en forma cerrada y los
    puntos estacionarios interiores salen de la misma cúbica que h.
    """
    result = maximize_surface(coef.surface(), label="E(σ_R²)")
    return VariancePrediction(
        value=result.value,
        at_pi=result.pi,
        at_pi_l=result.pi_l,
        kind=VarianceKind.PARTIAL_R,
        conservative=True,
        argmaxes=result.argmaxes,
        diagnostics={
            "boundaries": [b.model_dump() for b in result.boundaries],
            "interior": [c.model_dump() for c in result.interior],
            "cubic": result.cubic,
            "degenerate_cubic": result.degenerate_cubic,
        },
    )


def conservative_variance_ratio_aon(m: PopulationMoments) -> VariancePrediction:
    """Máximo de la fórmula de Roberts para σ_R² (π = 1/2)"""
    prediction = roberts_ratio_variance(m, 0.5)
    return prediction.model_copy(update={"conservative": True, "argmaxes": [(0.5, None)]})
