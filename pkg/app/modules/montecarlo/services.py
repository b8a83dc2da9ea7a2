"""
Servicios de simulación Monte Carlo
===================================

Realización de montos en error bajo los modelos generativos y simulación de
muestreo aleatorio simple con intervalos de confianza normales.
"""

import logging
import math
from typing import Tuple

import numpy as np

from .models import CoverageReport, ErrorModel, RealizedPopulation
from ..aon_design.services import check_rate
from ..numerics.services import two_sided_z
from ..population.models import ClaimPopulation
from ...config import settings
from ...shared.exceptions import ValidationException
from ...shared.random import make_generator, map_blocks, STREAM_REALIZE, STREAM_COVERAGE
from ...shared.schemas import Estimator

logger = logging.getLogger(__name__)


def _line_arrays(pop: ClaimPopulation) -> Tuple[np.ndarray, np.ndarray]:
    """Montos de error más probable por línea y el índice de reclamo de cada línea"""
    errors = [line.probable_error_amount for claim in pop.claims for line in claim.lines]
    owners = [i for i, claim in enumerate(pop.claims) for _ in claim.lines]
    return np.asarray(errors, dtype=np.int64), np.asarray(owners, dtype=np.int64)


def realize(pop: ClaimPopulation, model: ErrorModel, seed: int) -> RealizedPopulation:
    """
    Genera Y_i para cada reclamo

    Con probabilidad π el reclamo está totalmente en error (Y_i = X_i); si no,
    Y_i = Σ_j W_ij·X̃_ij con W_ij ~ Bernoulli(π_L) independientes. El modelo
    todo-o-nada equivale a π_L = 0.

    Args:
        pop: Población base
        model: AonModel o LineItemModel
        seed: Semilla de 64 bits

    Returns:
        RealizedPopulation con Y_i en centavos
    """
    pi = check_rate(model.pi, "pi")
    pi_l = check_rate(getattr(model, "pi_l", 0.0), "pi_l")

    rng = make_generator(seed, STREAM_REALIZE)
    full_error = rng.random(pop.n_pop) < pi
    line_errors, owners = _line_arrays(pop)
    fired = rng.random(len(line_errors)) < pi_l

    partial = np.zeros(pop.n_pop, dtype=np.int64)
    np.add.at(partial, owners[fired], line_errors[fired])
    y = np.where(full_error, pop.totals_cents(), partial)

    logger.debug(f"🎯 [REALIZE] π={pi} π_L={pi_l}: {int(full_error.sum())} reclamos en error total")
    return RealizedPopulation(base=pop, y_cents=[int(v) for v in y], model=model, seed=seed)


def _skewness(values: np.ndarray) -> float:
    centered = values - values.mean()
    variance = float((centered ** 2).mean())
    if variance <= 0.0:
        return 0.0
    return float((centered ** 3).mean()) / variance ** 1.5


def _srs_indices(rng: np.random.Generator, n_pop: int, n: int) -> np.ndarray:
    """Muestra sin reemplazo por Fisher-Yates parcial"""
    index = np.arange(n_pop)
    steps = np.arange(n)
    picks = steps + (rng.random(n) * (n_pop - steps)).astype(np.int64)
    for i, j in zip(steps.tolist(), picks.tolist()):
        index[i], index[j] = index[j], index[i]
    return index[:n]


def simulate_estimation(
    rp: RealizedPopulation,
    n: int,
    estimator: Estimator,
    confidence: float,
    replicates: int,
    seed: int,
    workers: int = 1,
) -> CoverageReport:
    """
    Cobertura de los intervalos de confianza en réplicas de MAS sin reemplazo

    En cada réplica se estima τ_y por expansión simple (Nȳ) o por razón
    (r̂τ_x). El error estándar usa la varianza muestral con divisor n−1
    (residuos y − r̂x para la razón) y el factor (1 − n/N). Una réplica cubre
    si |τ̂ − τ_y| ≤ z·ee; los intervalos de ancho cero cubren solo si el
    estimador coincide con τ_y.

    Args:
        rp: Población realizada
        n: Tamaño de muestra (2 ≤ n ≤ N)
        estimator: SIMPLE_EXPANSION o RATIO
        confidence: Nivel nominal
        replicates: Número de réplicas
        seed: Semilla del flujo Philox
        workers: Hilos; el reporte no depende de este valor

    Raises:
        ValidationException: n fuera de [2, N], réplicas < 1 o confianza fuera de (0, 1)
    """
    n_pop = rp.base.n_pop
    if not (2 <= n <= n_pop):
        raise ValidationException(f"debe estar en [2, {n_pop}]", field="n", value=n)
    if replicates < 1:
        raise ValidationException("debe ser al menos 1", field="replicates", value=replicates)
    z = two_sided_z(confidence)

    x = rp.base.totals()
    y = rp.y()
    tau_x = float(x.sum())
    tau_y = rp.tau_y
    fpc = 1.0 - n / n_pop
    tolerance = 1e-9 * max(1.0, abs(tau_y))

    def run_block(block: int, start: int, end: int) -> Tuple[int, float, float]:
        rng = make_generator(seed, STREAM_COVERAGE, block)
        covered, squared_error, margins = 0, 0.0, 0.0
        for _ in range(start, end):
            sample = _srs_indices(rng, n_pop, n)
            ys = y[sample]
            if estimator == Estimator.RATIO:
                xs = x[sample]
                ratio = ys.sum() / xs.sum()
                estimate = ratio * tau_x
                s2 = float(((ys - ratio * xs) ** 2).sum()) / (n - 1)
            else:
                estimate = n_pop * float(ys.mean())
                s2 = float(ys.var(ddof=1))
            half_width = z * math.sqrt(max(0.0, n_pop ** 2 * s2 / n * fpc))
            deviation = estimate - tau_y
            if abs(deviation) <= half_width + tolerance:
                covered += 1
            squared_error += deviation ** 2
            margins += half_width
        return covered, squared_error, margins

    results = map_blocks(run_block, replicates, settings.MC_BLOCK_SIZE, workers)
    covered = sum(r[0] for r in results)
    squared_error = sum(r[1] for r in results)
    margins = sum(r[2] for r in results)

    g1_y = _skewness(y)
    skew_flag = n < settings.COVERAGE_SKEW_FACTOR * g1_y ** 2
    attained = covered / replicates
    if skew_flag:
        logger.warning(
            f"⚠️ [COVERAGE] n={n} < {settings.COVERAGE_SKEW_FACTOR:g}·G1_y²={settings.COVERAGE_SKEW_FACTOR * g1_y ** 2:.1f}: "
            f"la cobertura normal puede quedar bajo el nivel nominal"
        )
    logger.info(
        f"📏 [COVERAGE] {estimator.value} n={n}: cobertura {attained:.4f} (nominal {confidence}) "
        f"en {replicates} réplicas"
    )

    return CoverageReport(
        replicates=replicates,
        estimator=estimator,
        n=n,
        pi=rp.pi,
        pi_l=rp.pi_l,
        nominal=confidence,
        attained=attained,
        mean_margin=margins / replicates,
        rmse=math.sqrt(squared_error / replicates),
        seed=seed,
        tau_y=tau_y,
        skew_g1_y=g1_y,
        skew_flag=skew_flag,
    )
