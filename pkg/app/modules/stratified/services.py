"""
Servicios de estratificación
============================

Varianza estratificada (expansión simple y razón), asignación de Neyman o
proporcional, evaluación de un vector de cortes y búsqueda del vector óptimo.

Los estratos se definen por total de reclamo con intervalos [low, high). Las
sumas de potencias de cada estrato son diferencias de prefijos sobre los
reclamos ordenados por total, así que cada estrato se evalúa en O(1).
"""

import logging
import math
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .models import AllocationMethod, StratumSummary, StratificationPlan
from ..aon_design.models import AonModel
from ..aon_design.services import clamp_variance, roberts_variance
from ..partial_design.models import LineItemModel
from ..partial_design.services import partial_y_from_sums
from ..population.models import ClaimPopulation, PowerSums
from ..population.services import moments_from_power_sums, power_sum_matrix
from ..population.utils import CENTS_PER_DOLLAR
from ..ratio_design.services import partial_r_from_sums, roberts_ratio_variance
from ...config import settings
from ...shared.exceptions import ValidationException, AllocationException
from ...shared.random import map_blocks
from ...shared.schemas import Estimator

logger = logging.getLogger(__name__)

ErrorModel = Union[AonModel, LineItemModel]
SEARCH_BLOCK_SIZE = 2000


# ===========================================
# VARIANZAS POR ESTRATO
# ===========================================

def stratum_variance(sums: PowerSums, estimator: Estimator, model: ErrorModel) -> float:
    """
    σ̂_h² predicha para un estrato con el π global

    Expansión simple: varianza de Roberts o h(π, π_L). Razón: fórmula de
    Roberts para σ_R² o E(σ_R²) bajo errores parciales. Los negativos de
    redondeo se llevan a 0.
    """
    if sums.n == 0:
        return 0.0
    if isinstance(model, LineItemModel):
        if estimator == Estimator.RATIO:
            surface = partial_r_from_sums(sums).surface()
        else:
            surface = partial_y_from_sums(sums)
        return clamp_variance(surface.evaluate(model.pi, model.pi_l), surface.scale)

    moments = moments_from_power_sums(sums)
    if estimator == Estimator.RATIO:
        return roberts_ratio_variance(moments, model.pi).value
    return roberts_variance(moments, model.pi).value


def _variance_of_total(sizes: Sequence[int], variances: Sequence[float], counts: Sequence[int]) -> float:
    total = 0.0
    for n_pop, variance, n in zip(sizes, variances, counts):
        if n_pop <= 1:
            continue
        total += n_pop ** 2 * variance / n * (n_pop - n) / (n_pop - 1)
    return total


def stratified_variance(plan: StratificationPlan, model: Optional[ErrorModel] = None) -> float:
    """
    Σ_h N_h²·σ̂_h²/n_h·(N_h−n_h)/(N_h−1)

    Args:
        plan: Plan con asignaciones n_h
        model: Si se indica, σ̂_h² se recalcula con este modelo a partir de las
            sumas de potencias de cada estrato; si no, se usa la predicha en el plan

    Raises:
        ValidationException: n_h > N_h o n_h = 0 en un estrato no vacío
    """
    sizes, variances, counts = [], [], []
    for stratum in plan.per_stratum:
        if stratum.n_pop == 0:
            continue
        if stratum.n_alloc == 0:
            raise ValidationException(f"n_h = 0 en el estrato {stratum.index} no vacío", field="n_alloc")
        if stratum.n_alloc > stratum.n_pop:
            raise ValidationException(
                f"n_h={stratum.n_alloc} excede N_h={stratum.n_pop} en el estrato {stratum.index}", field="n_alloc"
            )
        if stratum.n_pop == 1:
            logger.warning(f"⚠️ [STRATIFY] el estrato {stratum.index} tiene un solo reclamo; aporta 0")

        variance = stratum.predicted_variance
        if model is not None:
            if not stratum.power_sums:
                raise ValidationException("el plan no tiene sumas de potencias por estrato", field="power_sums")
            variance = stratum_variance(PowerSums.from_row(stratum.power_sums), plan.estimator, model)
        sizes.append(stratum.n_pop)
        variances.append(variance)
        counts.append(stratum.n_alloc)
    return _variance_of_total(sizes, variances, counts)


# ===========================================
# ASIGNACIÓN
# ===========================================

def allocation_counts(sizes: Sequence[int], weights: Sequence[float], n_total: int) -> List[int]:
    """
    Reparte n_total proporcionalmente a weights con restos mayores

    Cada estrato recibe al menos min(2, N_h) y como máximo N_h; los estratos
    fijados en un límite se excluyen y el resto se reparte con la misma regla.

    Raises:
        AllocationException: n_total menor que 2 por estrato no vacío, menor que
            la suma de mínimos o mayor que ΣN_h
    """
    nonempty = sum(1 for n_pop in sizes if n_pop > 0)
    if n_total < settings.MIN_SAMPLE_SIZE * nonempty:
        raise AllocationException(
            f"n_total={n_total} es menor que {settings.MIN_SAMPLE_SIZE}·{nonempty} para {nonempty} estratos no vacíos",
            field="n_total", value=n_total,
        )
    floors = [min(settings.MIN_SAMPLE_SIZE, n_pop) for n_pop in sizes]
    if n_total < sum(floors):
        raise AllocationException(
            f"n_total={n_total} es menor que el mínimo {sum(floors)} para {len(sizes)} estratos",
            field="n_total", value=n_total,
        )
    if n_total > sum(sizes):
        raise AllocationException(f"n_total={n_total} excede N={sum(sizes)}", field="n_total", value=n_total)

    fixed: Dict[int, int] = {}
    while True:
        free = [h for h in range(len(sizes)) if h not in fixed]
        if not free:
            break
        remaining = n_total - sum(fixed.values())
        free_weights = [max(0.0, float(weights[h])) for h in free]
        if sum(free_weights) <= 0.0:
            free_weights = [float(sizes[h]) for h in free]
        weight_sum = sum(free_weights)
        quotas = {h: remaining * w / weight_sum for h, w in zip(free, free_weights)}

        below = [h for h in free if quotas[h] < floors[h]]
        if below:
            fixed.update({h: floors[h] for h in below})
            continue
        above = [h for h in free if quotas[h] > sizes[h]]
        if above:
            fixed.update({h: sizes[h] for h in above})
            continue

        base = {h: math.floor(quotas[h]) for h in free}
        leftover = remaining - sum(base.values())
        for h in sorted(free, key=lambda h: (-(quotas[h] - base[h]), h))[:leftover]:
            base[h] += 1
        fixed.update(base)
        break

    counts = [fixed[h] for h in range(len(sizes))]
    excess = n_total - sum(counts)
    for h in sorted(range(len(sizes)), key=lambda h: (-float(weights[h]), h)):
        if excess <= 0:
            break
        extra = min(excess, sizes[h] - counts[h])
        counts[h] += extra
        excess -= extra
    return counts


def allocate(plan: StratificationPlan, n_total: int,
             method: AllocationMethod = AllocationMethod.NEYMAN) -> StratificationPlan:
    """
    Asigna n_total entre los estratos del plan

    Neyman: n_h ∝ N_h·σ̂_h. Proporcional: n_h ∝ N_h.

    Returns:
        StratificationPlan con n_h y la varianza total recalculada
    """
    strata = [s for s in plan.per_stratum if s.n_pop > 0]
    sizes = [s.n_pop for s in strata]
    if method == AllocationMethod.NEYMAN:
        weights = [s.n_pop * math.sqrt(s.predicted_variance) for s in strata]
    else:
        weights = [float(s.n_pop) for s in strata]

    counts = iter(allocation_counts(sizes, weights, n_total))
    per_stratum = [
        s.model_copy(update={"n_alloc": next(counts) if s.n_pop > 0 else 0}) for s in plan.per_stratum
    ]
    allocated = plan.model_copy(update={"per_stratum": per_stratum, "n_total": n_total, "allocation": method})
    return allocated.model_copy(update={"total_variance": stratified_variance(allocated)})


# ===========================================
# PLANES A PARTIR DE CORTES
# ===========================================

class _SortedFrame:
    """Reclamos ordenados por total con prefijos de sumas de potencias"""

    def __init__(self, pop: ClaimPopulation):
        totals = pop.totals_cents()
        order = np.argsort(totals, kind="stable")
        self.totals = totals[order]
        matrix = power_sum_matrix(pop, order)
        self.prefix = np.vstack([np.zeros((1, matrix.shape[1]), dtype=object), np.cumsum(matrix, axis=0)])
        self.values, counts = np.unique(self.totals, return_counts=True)
        self.starts = [0] + np.cumsum(counts).tolist()

    @property
    def n_pop(self) -> int:
        return len(self.totals)

    def sums(self, start: int, end: int) -> PowerSums:
        return PowerSums.from_row(self.prefix[end] - self.prefix[start])


def _rates(model: ErrorModel) -> Tuple[float, Optional[float]]:
    return model.pi, getattr(model, "pi_l", None)


def _assemble_plan(frame: _SortedFrame, positions: Sequence[int], estimator: Estimator, model: ErrorModel,
                   n_total: int, method: AllocationMethod, search: Optional[str]) -> StratificationPlan:
    """Construye el plan a partir de posiciones de corte en la lista ordenada de reclamos"""
    bounds = [0] + list(positions) + [frame.n_pop]
    breakpoints = [int(frame.totals[p]) / CENTS_PER_DOLLAR for p in positions]
    per_stratum = []
    for h, (start, end) in enumerate(zip(bounds[:-1], bounds[1:])):
        sums = frame.sums(start, end)
        per_stratum.append(StratumSummary(
            index=h,
            low=breakpoints[h - 1] if h > 0 else None,
            high=breakpoints[h] if h < len(breakpoints) else None,
            n_pop=end - start,
            moments=moments_from_power_sums(sums) if sums.n > 0 else None,
            predicted_variance=stratum_variance(sums, estimator, model),
            power_sums=sums.as_row(),
        ))

    pi, pi_l = _rates(model)
    skeleton = StratificationPlan(
        breakpoints=breakpoints, per_stratum=per_stratum, estimator=estimator,
        pi=pi, pi_l=pi_l, search=search,
    )
    return allocate(skeleton, n_total, method)


def build_plan(pop: ClaimPopulation, breakpoints: Sequence[float], estimator: Estimator, model: ErrorModel,
               n_total: int, method: AllocationMethod = AllocationMethod.NEYMAN) -> StratificationPlan:
    """
    Evalúa un vector de cortes dado (en dólares)

    Raises:
        ValidationException: Cortes no crecientes o que dejan un estrato vacío
    """
    cents = [int(round(b * CENTS_PER_DOLLAR)) for b in breakpoints]
    if any(b >= a for a, b in zip(cents[1:], cents[:-1])):
        raise ValidationException("los cortes deben ser estrictamente crecientes", field="breakpoints")

    frame = _SortedFrame(pop)
    positions = np.searchsorted(frame.totals, cents, side="left").tolist()
    bounds = [0] + positions + [frame.n_pop]
    if any(end <= start for start, end in zip(bounds[:-1], bounds[1:])):
        raise ValidationException("un corte deja un estrato vacío", field="breakpoints", value=list(breakpoints))
    return _assemble_plan(frame, positions, estimator, model, n_total, method, search=None)


# ===========================================
# BÚSQUEDA DE CORTES ÓPTIMOS
# ===========================================

def _thin(candidates: List[int], starts: List[int], n_pop: int, limit: int) -> List[int]:
    """Reduce los candidatos a cuantiles de la distribución de reclamos"""
    targets = np.linspace(0, n_pop, limit + 2)[1:-1]
    thinned = np.searchsorted(np.asarray(starts), targets, side="left")
    thinned = np.clip(thinned, candidates[0], candidates[-1])
    return sorted(set(int(p) for p in thinned))


def _is_better(value: float, best: Optional[float]) -> bool:
    if best is None:
        return True
    return value < best - settings.TIE_REL_TOL * abs(best)


def optimize_breakpoints(
    pop: ClaimPopulation,
    L: int,
    estimator: Estimator,
    model: ErrorModel,
    n_total: int,
    method: AllocationMethod = AllocationMethod.NEYMAN,
    workers: int = 1,
) -> StratificationPlan:
    """
    Cortes que minimizan la varianza estratificada

    Para L ≤ 3 la búsqueda es exhaustiva sobre los totales distintos (con la
    asignación y la varianza exactas de cada vector). Para L > 3 se usa
    programación dinámica sobre una rejilla de cuantiles minimizando ΣN_h·σ̂_h
    y el vector resultante se evalúa en forma exacta. Los empates se resuelven
    hacia el vector lexicográficamente menor.

    Bajo el estimador de razón y errores todo-o-nada cada σ̂_h² es π(1−π) por un
    factor del estrato; ese múltiplo común no cambia ni la asignación ni el
    orden de los vectores, así que los cortes no dependen de π.

    Raises:
        ValidationException: L < 2, L mayor que el número de totales distintos
            o n_total fuera de [2L, N]
    """
    if L < 2:
        raise ValidationException("debe ser al menos 2", field="L", value=L)
    frame = _SortedFrame(pop)
    n_distinct = len(frame.values)
    if L > n_distinct:
        raise ValidationException(
            f"L={L} excede el número de totales distintos ({n_distinct})", field="L", value=L
        )
    if n_total < settings.MIN_SAMPLE_SIZE * L or n_total > frame.n_pop:
        raise AllocationException(
            f"n_total debe estar en [{settings.MIN_SAMPLE_SIZE * L}, {frame.n_pop}]", field="n_total", value=n_total
        )

    cache: Dict[Tuple[int, int], float] = {}

    def variance_between(p: int, q: int) -> float:
        key = (p, q)
        if key not in cache:
            sums = frame.sums(frame.starts[p], frame.starts[q])
            cache[key] = stratum_variance(sums, estimator, model)
        return cache[key]

    def objective(vector: Tuple[int, ...]) -> float:
        edges = (0,) + vector + (n_distinct,)
        sizes = [frame.starts[q] - frame.starts[p] for p, q in zip(edges[:-1], edges[1:])]
        variances = [variance_between(p, q) for p, q in zip(edges[:-1], edges[1:])]
        if method == AllocationMethod.NEYMAN:
            weights = [n * math.sqrt(v) for n, v in zip(sizes, variances)]
        else:
            weights = [float(n) for n in sizes]
        counts = allocation_counts(sizes, weights, n_total)
        return _variance_of_total(sizes, variances, counts)

    candidates = list(range(1, n_distinct))
    if L <= 3:
        if len(candidates) > settings.MAX_BREAKPOINT_CANDIDATES:
            logger.warning(
                f"⚠️ [STRATIFY] {len(candidates)} candidatos; se reducen a "
                f"{settings.MAX_BREAKPOINT_CANDIDATES} cuantiles"
            )
            candidates = _thin(candidates, frame.starts, frame.n_pop, settings.MAX_BREAKPOINT_CANDIDATES)
        vectors = list(combinations(candidates, L - 1))
        best_vector = _exhaustive_search(vectors, objective, workers)
        search = "exhaustive"
    else:
        grid = candidates
        if len(grid) > settings.DP_GRID_SIZE:
            grid = _thin(candidates, frame.starts, frame.n_pop, settings.DP_GRID_SIZE)
        if len(grid) < L - 1:
            raise ValidationException(f"la rejilla tiene menos de {L - 1} cortes", field="L", value=L)
        best_vector = _dynamic_search(grid, L, n_distinct, frame.starts, variance_between)
        search = "dp"

    positions = [frame.starts[p] for p in best_vector]
    plan = _assemble_plan(frame, positions, estimator, model, n_total, method, search=search)
    logger.info(
        f"✂️ [STRATIFY] L={L} {estimator.value} ({search}): cortes {plan.breakpoints}, "
        f"varianza {plan.total_variance:,.2f}"
    )
    return plan


def _exhaustive_search(vectors: List[Tuple[int, ...]], objective: Callable[[Tuple[int, ...]], float],
                       workers: int) -> Tuple[int, ...]:
    """Recorre los vectores en orden lexicográfico; la reducción por bloques conserva ese orden"""

    def run_block(block: int, start: int, end: int) -> Tuple[Optional[float], Optional[Tuple[int, ...]]]:
        best_value, best_vector = None, None
        for vector in vectors[start:end]:
            value = objective(vector)
            if _is_better(value, best_value):
                best_value, best_vector = value, vector
        return best_value, best_vector

    best_value, best_vector = None, None
    for value, vector in map_blocks(run_block, len(vectors), SEARCH_BLOCK_SIZE, workers):
        if vector is not None and _is_better(value, best_value):
            best_value, best_vector = value, vector
    return best_vector


def _dynamic_search(grid: List[int], L: int, n_distinct: int, starts: List[int],
                    variance_between: Callable[[int, int], float]) -> Tuple[int, ...]:
    """Programación dinámica sobre la rejilla minimizando ΣN_h·σ̂_h"""
    points = [0] + grid + [n_distinct]
    size = len(points)

    def cost(i: int, j: int) -> float:
        p, q = points[i], points[j]
        return (starts[q] - starts[p]) * math.sqrt(variance_between(p, q))

    best = [[math.inf] * size for _ in range(L + 1)]
    parent = [[-1] * size for _ in range(L + 1)]
    for j in range(1, size):
        best[1][j] = cost(0, j)
    for level in range(2, L + 1):
        for j in range(level, size):
            for i in range(level - 1, j):
                if best[level - 1][i] == math.inf:
                    continue
                value = best[level - 1][i] + cost(i, j)
                current = best[level][j]
                if current == math.inf or _is_better(value, current):
                    best[level][j] = value
                    parent[level][j] = i

    vector, j = [], size - 1
    for level in range(L, 1, -1):
        j = parent[level][j]
        vector.append(points[j])
    return tuple(sorted(vector))
