"""
Tests de estratificación: asignación, varianza estratificada y cortes óptimos
"""
import numpy as np
import pytest

from conftest import lognormal_population, make_multiline, make_population

from app.modules.aon_design import roberts_variance
from app.modules.aon_design.models import AonModel
from app.modules.partial_design import partial_y_coefficients
from app.modules.partial_design.models import LineItemModel
from app.modules.population import ClaimPopulation, compute_moments
from app.modules.stratified import (
    AllocationMethod,
    StratificationPlan,
    StratumSummary,
    allocate,
    allocation_counts,
    build_plan,
    optimize_breakpoints,
    stratified_variance,
)
from app.shared.exceptions import AllocationException, ValidationException
from app.shared.schemas import Estimator


def _hand_plan(n_alloc=(10, 10)) -> StratificationPlan:
    return StratificationPlan(
        per_stratum=[
            StratumSummary(index=0, n_pop=100, predicted_variance=4.0, n_alloc=n_alloc[0]),
            StratumSummary(index=1, n_pop=50, predicted_variance=9.0, n_alloc=n_alloc[1]),
        ],
        estimator=Estimator.SIMPLE_EXPANSION,
    )


# ===========================================
# ASIGNACIÓN
# ===========================================

def test_asignacion_restos_mayores():
    """Test pesos (300, 100) con n = 8 dan (6, 2)"""
    assert allocation_counts([100, 50], [300.0, 100.0], 8) == [6, 2]


def test_asignacion_respeta_minimo():
    """Test un estrato con peso 0 recibe el mínimo de 2"""
    assert allocation_counts([10, 10], [0.0, 5.0], 6) == [2, 4]


def test_asignacion_respeta_tamano_del_estrato():
    """Test n_h ≤ N_h con el sobrante repartido en los demás"""
    assert allocation_counts([3, 100], [1000.0, 1.0], 20) == [3, 17]


def test_asignacion_suma_n_total():
    """Test Σn_h = n_total con pesos arbitrarios"""
    sizes = [40, 25, 60, 5]
    counts = allocation_counts(sizes, [1.3, 7.1, 2.2, 0.4], 57)

    assert sum(counts) == 57
    assert all(min(2, n) <= c <= n for c, n in zip(counts, sizes))


def test_asignar_neyman_y_proporcional():
    """Test Neyman con pesos N_h·σ̂_h = (200, 150) y proporcional con (100, 50)"""
    neyman = allocate(_hand_plan(), 7)
    proportional = allocate(_hand_plan(), 6, AllocationMethod.PROPORTIONAL)

    assert [s.n_alloc for s in neyman.per_stratum] == [4, 3]
    assert neyman.n_total == 7
    assert neyman.total_variance == pytest.approx(100 ** 2 * 1.0 * (96 / 99) + 50 ** 2 * 3.0 * (47 / 49))
    assert [s.n_alloc for s in proportional.per_stratum] == [4, 2]
    assert proportional.allocation == AllocationMethod.PROPORTIONAL


@pytest.mark.parametrize("n_total", [3, 11])
def test_asignacion_infactible(n_total):
    """Test n_total menor que ΣN_h mínimos o mayor que N"""
    with pytest.raises(AllocationException):
        allocation_counts([5, 5], [1.0, 1.0], n_total)


def test_asignacion_estrato_de_un_reclamo_exige_dos_por_estrato():
    """Test con N_h = 1 sigue exigiéndose n_total ≥ 2L"""
    with pytest.raises(AllocationException):
        allocation_counts([1, 10], [1.0, 1.0], 3)
    assert allocation_counts([1, 10], [1.0, 1.0], 4) == [1, 3]


def test_plan_con_estrato_de_un_reclamo():
    """Test X = 1..10 cortado en 2.00: n_total = 3 se rechaza y 4 da (1, 3)"""
    pop = make_population([float(x) for x in range(1, 11)])
    model = AonModel(pi=0.5)

    with pytest.raises(AllocationException):
        build_plan(pop, [2.0], Estimator.SIMPLE_EXPANSION, model, 3)
    plan = build_plan(pop, [2.0], Estimator.SIMPLE_EXPANSION, model, 4)

    assert [s.n_alloc for s in plan.per_stratum] == [1, 3]


# ===========================================
# VARIANZA ESTRATIFICADA
# ===========================================

def test_varianza_estratificada_a_mano():
    """Test Σ N_h²·σ̂_h²/n_h·(N_h−n_h)/(N_h−1)"""
    expected = 100 ** 2 * 0.4 * (90 / 99) + 50 ** 2 * 0.9 * (40 / 49)
    assert stratified_variance(_hand_plan()) == pytest.approx(expected)


@pytest.mark.parametrize("n_alloc", [(0, 10), (10, 51)])
def test_varianza_estratificada_asignacion_invalida(n_alloc):
    """Test n_h = 0 o n_h > N_h"""
    with pytest.raises(ValidationException):
        stratified_variance(_hand_plan(n_alloc))


def test_modelo_sin_sumas_de_potencias():
    """Test recalcular con un modelo exige las sumas del estrato"""
    with pytest.raises(ValidationException):
        stratified_variance(_hand_plan(), AonModel(pi=0.2))


# ===========================================
# PLANES CON CORTES DADOS
# ===========================================

def test_plan_con_cortes_dados():
    """Test X = 1..10 cortado en 5.00"""
    pop = make_population([float(x) for x in range(1, 11)])
    model = AonModel(pi=0.5)

    plan = build_plan(pop, [5.0], Estimator.SIMPLE_EXPANSION, model, 6)

    low, high = plan.per_stratum
    assert (low.n_pop, high.n_pop) == (4, 6)
    assert (low.low, low.high, high.low, high.high) == (None, 5.0, 5.0, None)
    assert low.n_alloc + high.n_alloc == 6
    assert plan.search is None
    assert plan.pi == 0.5 and plan.pi_l is None
    assert low.predicted_variance == pytest.approx(
        roberts_variance(compute_moments(make_population([1.0, 2.0, 3.0, 4.0])), 0.5).value
    )
    assert plan.total_variance == pytest.approx(stratified_variance(plan))
    assert stratified_variance(plan, model) == pytest.approx(plan.total_variance)


def test_plan_proporcional():
    """Test asignación proporcional a N_h"""
    pop = make_population([float(x) for x in range(1, 21)])

    plan = build_plan(pop, [6.0], Estimator.SIMPLE_EXPANSION, AonModel(pi=0.3), 10,
                      method=AllocationMethod.PROPORTIONAL)

    assert [s.n_alloc for s in plan.per_stratum] == [3, 7]
    assert plan.allocation == AllocationMethod.PROPORTIONAL


def test_estratos_con_errores_parciales():
    """Test σ̂_h² del estrato coincide con h(π, π_L) de la subpoblación"""
    pop = make_multiline([
        [(3.0, 1.0), (2.0, 2.0)], [(1.5, 0.5)], [(4.0, 4.0)], [(2.5, 0.0), (1.0, 1.0)],
        [(9.0, 3.0)], [(12.0, 12.0), (1.0, 0.0)], [(20.0, 5.5)], [(8.0, 8.0)],
    ])
    model = LineItemModel(pi=0.2, pi_l=0.3)

    plan = build_plan(pop, [6.0], Estimator.SIMPLE_EXPANSION, model, 6)

    below = ClaimPopulation(claims=tuple(c for c in pop.claims if c.total < 600))
    expected = partial_y_coefficients(below).evaluate(0.2, 0.3)
    assert plan.per_stratum[0].predicted_variance == pytest.approx(expected)
    assert plan.pi_l == 0.3


def test_cortes_invalidos():
    """Test cortes no crecientes o que dejan un estrato vacío"""
    pop = make_population([float(x) for x in range(1, 11)])
    model = AonModel(pi=0.5)

    with pytest.raises(ValidationException):
        build_plan(pop, [5.0, 3.0], Estimator.SIMPLE_EXPANSION, model, 6)
    with pytest.raises(ValidationException):
        build_plan(pop, [0.5], Estimator.SIMPLE_EXPANSION, model, 6)


# ===========================================
# CORTES ÓPTIMOS
# ===========================================

@pytest.mark.parametrize("estimator", [Estimator.SIMPLE_EXPANSION, Estimator.RATIO])
def test_busqueda_exhaustiva_dos_estratos(estimator):
    """Test el óptimo con L = 2 no es peor que ningún corte posible"""
    pop = lognormal_population(41, 40)
    model = AonModel(pi=0.25)

    best = optimize_breakpoints(pop, 2, estimator, model, 12)

    assert best.search == "exhaustive"
    values = np.unique(pop.totals_cents())[1:] / 100.0
    every = [build_plan(pop, [v], estimator, model, 12).total_variance for v in values.tolist()]
    assert best.total_variance == pytest.approx(min(every), rel=1e-9)


def test_cortes_de_razon_no_dependen_de_pi():
    """Test razón todo-o-nada: mismos cortes para π = 0.1 y π = 0.7 con L = 3"""
    pop = lognormal_population(42, 30)

    low = optimize_breakpoints(pop, 3, Estimator.RATIO, AonModel(pi=0.1), 12)
    high = optimize_breakpoints(pop, 3, Estimator.RATIO, AonModel(pi=0.7), 12)

    assert low.breakpoints == high.breakpoints
    assert low.pi == 0.1 and high.pi == 0.7


@pytest.mark.parametrize("seed", range(20))
def test_cortes_de_razon_invariantes_en_veinte_poblaciones(seed):
    """Test razón todo-o-nada: un único vector de cortes para π = 0.1, 0.2, ..., 0.9"""
    pop = lognormal_population(300 + seed, 40)

    found = {
        tuple(optimize_breakpoints(pop, 2, Estimator.RATIO, AonModel(pi=pi), 12).breakpoints)
        for pi in np.round(np.arange(0.1, 1.0, 0.1), 1).tolist()
    }

    assert len(found) == 1


def test_cortes_de_expansion_simple_dependen_de_pi():
    """Test expansión simple: en alguna población los cortes cambian con π"""
    changed = 0
    for seed in range(20):
        pop = lognormal_population(300 + seed, 40)
        found = {
            tuple(optimize_breakpoints(pop, 2, Estimator.SIMPLE_EXPANSION, AonModel(pi=pi), 12).breakpoints)
            for pi in (0.01, 0.1, 0.5, 0.9, 0.99)
        }
        changed += len(found) > 1

    assert changed >= 1


def test_busqueda_independiente_de_workers():
    """Test mismos cortes con 1 y 4 workers"""
    pop = lognormal_population(43, 60)
    model = AonModel(pi=0.4)

    single = optimize_breakpoints(pop, 3, Estimator.SIMPLE_EXPANSION, model, 20, workers=1)
    threaded = optimize_breakpoints(pop, 3, Estimator.SIMPLE_EXPANSION, model, 20, workers=4)

    assert single.breakpoints == threaded.breakpoints
    assert single.total_variance == threaded.total_variance


def test_programacion_dinamica_cuatro_estratos():
    """Test L = 4 usa la rejilla de cuantiles y devuelve cortes crecientes"""
    pop = lognormal_population(44, 80)

    plan = optimize_breakpoints(pop, 4, Estimator.SIMPLE_EXPANSION, AonModel(pi=0.3), 24)

    assert plan.search == "dp"
    assert len(plan.breakpoints) == 3
    assert plan.breakpoints == sorted(set(plan.breakpoints))
    assert sum(s.n_alloc for s in plan.per_stratum) == 24
    assert all(s.n_pop > 0 for s in plan.per_stratum)


def test_parametros_de_busqueda_invalidos():
    """Test L < 2, L mayor que los totales distintos y n_total < 2L"""
    pop = make_population([1.0, 1.0, 2.0, 3.0, 3.0, 4.0])
    model = AonModel(pi=0.5)

    with pytest.raises(ValidationException):
        optimize_breakpoints(pop, 1, Estimator.SIMPLE_EXPANSION, model, 4)
    with pytest.raises(ValidationException):
        optimize_breakpoints(pop, 5, Estimator.SIMPLE_EXPANSION, model, 6)
    with pytest.raises(AllocationException):
        optimize_breakpoints(pop, 3, Estimator.SIMPLE_EXPANSION, model, 5)
