"""
Generadores de poblaciones de auditoría simuladas
=================================================

Tres poblaciones calibradas a estadísticos resumen publicados:

- edwards: servicios de salud a domicilio. Cuerpo lognormal más un pico
  uniforme en [$100, $150]; total ≈ $1.1M.
- neter: lognormal de mayor dispersión; total ≈ $7.5M.
- clinic: visitas con 1, 2 o 3 líneas (63/33/4 %), montos por línea gamma y
  montos de error más probable = monto × fracción beta. Las líneas se
  reescalan en forma afín para que los totales por reclamo tengan media
  $30.54 y desviación $13.43, y los errores media $8.54 y desviación $6.45.

Todo el azar sale de un flujo Philox (semilla, STREAM_SYNTHPOP, tipo).
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import UnknownPopulationKindException
from .models import SynthKind, SynthSpec
from ..population.models import Claim, ClaimPopulation, LineItem
from ...shared.random import make_generator, STREAM_SYNTHPOP

logger = logging.getLogger(__name__)

KIND_STREAMS = {SynthKind.EDWARDS: 1, SynthKind.NETER: 2, SynthKind.CLINIC: 3}

# Edwards
EDWARDS_TOTAL = 1_100_000.00
EDWARDS_SPIKE_WEIGHT = 0.30
EDWARDS_SPIKE_RANGE = (100.0, 150.0)
EDWARDS_LOG_MEAN = 4.598
EDWARDS_LOG_SD = 0.629

# Neter
NETER_TOTAL = 7_500_000.00
NETER_LOG_SD = 1.3015

# Clinic
CLINIC_LINE_COUNTS = (1, 2, 3)
CLINIC_LINE_SHARES = (0.63, 0.33, 0.04)
CLINIC_GAMMA_SHAPE = 22.5
CLINIC_GAMMA_SCALE = 0.963
CLINIC_CLAIM_MEAN = 30.54
CLINIC_CLAIM_SD = 13.43
CLINIC_DOWNGRADE_BETA = (0.725, 1.115)
CLINIC_ERROR_MEAN = 8.54
CLINIC_ERROR_SD = 6.45


def synth_spec(kind: str, seed: int, size_override: Optional[int] = None) -> SynthSpec:
    """
    Construye un SynthSpec a partir de texto

    Raises:
        UnknownPopulationKindException: Si kind no es edwards, neter ni clinic
    """
    try:
        synth_kind = SynthKind(kind)
    except ValueError:
        raise UnknownPopulationKindException(kind)
    return SynthSpec(kind=synth_kind, seed=seed, size_override=size_override)


def _to_cents(amounts: np.ndarray) -> np.ndarray:
    return np.maximum(np.rint(amounts * 100.0), 1).astype(np.int64)


def _single_line_population(prefix: str, cents: np.ndarray) -> ClaimPopulation:
    claims = [
        Claim(
            claim_id=f"{prefix}{i + 1:06d}",
            lines=(LineItem(claimed_amount=int(c), probable_error_amount=int(c)),),
        )
        for i, c in enumerate(cents.tolist())
    ]
    return ClaimPopulation(claims=tuple(claims))


def _edwards(rng: np.random.Generator, size: int) -> ClaimPopulation:
    spike = rng.random(size) < EDWARDS_SPIKE_WEIGHT
    body = rng.lognormal(EDWARDS_LOG_MEAN, EDWARDS_LOG_SD, size)
    uniform = rng.uniform(*EDWARDS_SPIKE_RANGE, size)
    amounts = np.where(spike, uniform, body)
    amounts *= EDWARDS_TOTAL * size / 9000 / amounts.sum()
    return _single_line_population("E", _to_cents(amounts))


def _neter(rng: np.random.Generator, size: int) -> ClaimPopulation:
    mean = NETER_TOTAL / 4033
    log_mean = np.log(mean) - NETER_LOG_SD ** 2 / 2.0
    amounts = rng.lognormal(log_mean, NETER_LOG_SD, size)
    amounts *= NETER_TOTAL * size / 4033 / amounts.sum()
    return _single_line_population("N", _to_cents(amounts))


def _claim_calibration(totals: np.ndarray, counts: np.ndarray, mean: float, sd: float) -> Tuple[float, float]:
    """
    (a, b) tales que a·T_i + b·k_i tenga la media y la desviación pedidas

    T_i es el total del reclamo y k_i su número de líneas; sumar b a cada línea
    suma b·k_i al reclamo. De las dos raíces se toma la de menor |b|. Sin
    solución real se usa la b de varianza mínima.
    """
    counts = counts.astype(float)
    p = mean / totals.mean()
    q = counts.mean() / totals.mean()
    var_t = totals.var()
    cov = float(((totals - totals.mean()) * (counts - counts.mean())).mean())
    quad_a = q * q * var_t - 2.0 * q * cov + counts.var()
    quad_b = 2.0 * p * cov - 2.0 * p * q * var_t
    quad_c = p * p * var_t - sd * sd
    if quad_a <= 1e-12:
        return p, 0.0
    discriminant = quad_b * quad_b - 4.0 * quad_a * quad_c
    if discriminant < 0.0:
        b = -quad_b / (2.0 * quad_a)
    else:
        roots = ((-quad_b + s * np.sqrt(discriminant)) / (2.0 * quad_a) for s in (1.0, -1.0))
        b = min(roots, key=abs)
    return p - q * b, float(b)


def _clinic(rng: np.random.Generator, size: int) -> ClaimPopulation:
    line_counts = rng.choice(CLINIC_LINE_COUNTS, size=size, p=CLINIC_LINE_SHARES)
    n_lines = int(line_counts.sum())
    owners = np.repeat(np.arange(size), line_counts)

    line_amounts = rng.gamma(CLINIC_GAMMA_SHAPE, CLINIC_GAMMA_SCALE, n_lines)
    totals = np.bincount(owners, weights=line_amounts, minlength=size)
    a, b = _claim_calibration(totals, line_counts, CLINIC_CLAIM_MEAN, CLINIC_CLAIM_SD)
    line_amounts = np.maximum(a * line_amounts + b, 0.01)

    downgrade = rng.beta(*CLINIC_DOWNGRADE_BETA, n_lines)
    errors = line_amounts * downgrade
    spread = errors.std()
    if spread > 0.0:
        errors = CLINIC_ERROR_MEAN + (errors - errors.mean()) * (CLINIC_ERROR_SD / spread)
    else:
        errors = np.full(n_lines, CLINIC_ERROR_MEAN)
    errors = np.clip(errors, 0.0, line_amounts)

    logger.debug(f"🏥 [SYNTH] clinic: líneas reescaladas con a={a:.4f}, b={b:.4f}")

    claimed_cents = _to_cents(line_amounts)
    error_cents = np.minimum(np.rint(errors * 100.0).astype(np.int64), claimed_cents)

    claims: List[Claim] = []
    offset = 0
    for i, count in enumerate(line_counts.tolist()):
        lines = tuple(
            LineItem(claimed_amount=int(claimed_cents[j]), probable_error_amount=int(error_cents[j]))
            for j in range(offset, offset + count)
        )
        claims.append(Claim(claim_id=f"C{i + 1:06d}", lines=lines))
        offset += count
    return ClaimPopulation(claims=tuple(claims))


GENERATORS = {
    SynthKind.EDWARDS: _edwards,
    SynthKind.NETER: _neter,
    SynthKind.CLINIC: _clinic,
}


def generate(spec: SynthSpec) -> ClaimPopulation:
    """
    Genera una población simulada determinista

    Args:
        spec: Tipo, semilla y tamaño opcional

    Returns:
        ClaimPopulation: Misma salida para la misma semilla en cualquier máquina
    """
    rng = make_generator(spec.seed, STREAM_SYNTHPOP, KIND_STREAMS[spec.kind])
    population = GENERATORS[spec.kind](rng, spec.size)
    logger.info(
        f"🧪 [SYNTHPOP] {spec.kind.value} seed={spec.seed}: {population.n_pop} reclamos, "
        f"{population.n_lines} líneas"
    )
    return population
