"""
Tests del estimador de razón: preferencia, σ_R² de Roberts y superficie E(σ_R²)
"""
import math

import numpy as np
import pytest

from conftest import lognormal_population, make_multiline, make_population

from app.modules.aon_design import sample_size
from app.modules.numerics import normal_cdf
from app.modules.population import compute_moments, distinct_value_groups
from app.modules.ratio_design import (
    PreferenceMethod,
    conservative_variance_ratio,
    conservative_variance_ratio_aon,
    exact_ratio_variance_gap,
    expected_var_r,
    partial_r_coefficients,
    preference_probability,
    preference_probability_exact,
    roberts_ratio_variance,
    zero_error_fallback_variance,
    zero_error_pi_bound,
)
from app.modules.synthpop import generate, synth_spec
from app.shared.exceptions import ValidationException
from app.shared.schemas import Estimator

GRID = np.linspace(0.0, 1.0, 41).tolist()


def _partial_population(seed: int, n_claims: int = 15):
    rng = np.random.default_rng(seed)
    claims = []
    for _ in range(n_claims):
        lines = []
        for _ in range(int(rng.integers(1, 4))):
            cents = int(rng.integers(1, 20000))
            lines.append((cents / 100.0, int(rng.integers(0, cents + 1)) / 100.0))
        claims.append(lines)
    return make_multiline(claims)


# ===========================================
# PREFERENCIA ENTRE ESTIMADORES
# ===========================================

def test_preferencia_normal_dos_reclamos(two_claims):
    """Test E(g) = πσ²/2 y Var(g) = π(1−π)Σc²/N²"""
    m = compute_moments(two_claims)

    report = preference_probability(distinct_value_groups(two_claims, m), m, 0.5)

    sum_c2 = (175.0 / 3.0) ** 2 + (250.0 / 3.0) ** 2
    assert report.mean_g == pytest.approx(6.25)
    assert report.var_g == pytest.approx(0.25 * sum_c2 / 4.0)
    assert report.prob_ratio_better == pytest.approx(normal_cdf(6.25 / math.sqrt(report.var_g)))
    assert report.method == PreferenceMethod.NORMAL_APPROX
    assert report.normal_reliable is False
    assert report.min_group_size == 1


def test_preferencia_en_los_extremos(two_claims):
    """Test límites 0.5 en π = 0 y 1 en π = 1"""
    m = compute_moments(two_claims)
    groups = distinct_value_groups(two_claims, m)

    at_zero = preference_probability(groups, m, 0.0)
    at_one = preference_probability(groups, m, 1.0)

    assert at_zero.prob_ratio_better == 0.5 and at_zero.degenerate
    assert at_one.prob_ratio_better == 1.0 and at_one.degenerate


def test_preferencia_poblacion_constante():
    """Test σ_x² = 0: sin diferencia entre estimadores"""
    pop = make_population([7.0, 7.0, 7.0])
    m = compute_moments(pop)

    report = preference_probability(distinct_value_groups(pop, m), m, 0.4)

    assert report.prob_ratio_better == 0.5
    assert report.degenerate


def test_preferencia_exhaustiva_dos_reclamos(two_claims):
    """Test P(g > 0) = 0.5 en π = 0.5 por enumeración"""
    report = preference_probability_exact(two_claims, 0.5)

    assert report.prob_ratio_better == pytest.approx(0.5)
    assert report.method == PreferenceMethod.EXHAUSTIVE


def test_preferencia_exhaustiva_limita_n():
    """Test la enumeración rechaza N > 20"""
    with pytest.raises(ValidationException):
        preference_probability_exact(lognormal_population(1, 21), 0.5)


def test_montecarlo_reproducible_y_cercano_al_exacto():
    """Test misma semilla con 1 y 4 workers; dentro de 5 errores estándar del exacto"""
    pop = lognormal_population(12, 10, sigma=0.8)
    exact = preference_probability_exact(pop, 0.3).prob_ratio_better

    single = preference_probability_exact(pop, 0.3, mode=PreferenceMethod.MONTE_CARLO, replicates=20000, seed=5)
    threaded = preference_probability_exact(
        pop, 0.3, mode=PreferenceMethod.MONTE_CARLO, replicates=20000, seed=5, workers=4
    )

    assert single.prob_ratio_better == threaded.prob_ratio_better
    assert single.replicates == 20000
    assert abs(single.prob_ratio_better - exact) <= 5.0 * max(single.mc_std_err, 1e-3)


def test_montecarlo_replicas_invalidas(two_claims):
    """Test replicates < 1"""
    with pytest.raises(ValidationException):
        preference_probability_exact(two_claims, 0.5, mode=PreferenceMethod.MONTE_CARLO, replicates=0)


# ===========================================
# σ_R² TODO-O-NADA
# ===========================================

def test_roberts_razon_dos_reclamos(two_claims):
    """Test σ_R²(0.5) = 22.22 para X = {10, 20}"""
    prediction = roberts_ratio_variance(compute_moments(two_claims), 0.5)

    assert prediction.value == pytest.approx(200.0 / 9.0)
    assert prediction.diagnostics["large_n"] == pytest.approx(62.5)


def test_conservadora_razon_todo_o_nada(two_claims):
    """Test el máximo está en π = 1/2"""
    prediction = conservative_variance_ratio_aon(compute_moments(two_claims))

    assert prediction.at_pi == 0.5
    assert prediction.conservative
    assert prediction.argmaxes == [(0.5, None)]


def test_brecha_nula_en_poblacion_simetrica(two_claims):
    """Test G1 = 0: la fórmula de Roberts es exacta"""
    gap = exact_ratio_variance_gap(compute_moments(two_claims), 0.5)

    assert gap.exact == pytest.approx(200.0 / 9.0)
    assert gap.gap == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("seed", [21, 22])
def test_brecha_proporcional_a_la_asimetria(seed):
    """Test printed − exact = π(1−π)·G1·σ_x³/(N·μ_x)"""
    m = compute_moments(lognormal_population(seed, 25))
    assert m.g1_skew > 0

    gap = exact_ratio_variance_gap(m, 0.3)

    assert gap.gap > 0
    assert gap.gap == pytest.approx(gap.predicted_gap, rel=1e-6)


def test_cota_sin_errores():
    """Test 1 − (1 − c)^(1/n)"""
    assert zero_error_pi_bound(50, 0.95) == pytest.approx(1.0 - 0.05 ** (1.0 / 50.0))
    assert zero_error_pi_bound(50, 0.95) == pytest.approx(0.05816, abs=1e-5)
    assert zero_error_pi_bound(1, 0.9) == pytest.approx(0.9)


@pytest.mark.parametrize("n,confidence", [(0, 0.9), (10, 0.4), (10, 1.0)])
def test_cota_sin_errores_invalida(n, confidence):
    """Test n < 1 o confianza fuera de (0.5, 1)"""
    with pytest.raises(ValidationException):
        zero_error_pi_bound(n, confidence)


def test_varianza_de_respaldo_sin_errores(two_claims):
    """Test σ_R² de Roberts en la cota, registrada en diagnostics"""
    m = compute_moments(two_claims)

    prediction = zero_error_fallback_variance(m, 50, 0.95)

    bound = zero_error_pi_bound(50, 0.95)
    assert prediction.diagnostics["zero_error_bound"] == pytest.approx(bound)
    assert prediction.value == pytest.approx(roberts_ratio_variance(m, bound).value)


# ===========================================
# E(σ_R²) CON ERRORES PARCIALES
# ===========================================

def test_coeficientes_razon_dos_reclamos(two_claims):
    """Test a1 = 88.89 y k = (−1/9, −7/9)"""
    coef = partial_r_coefficients(two_claims)

    assert coef.a1 == pytest.approx(800.0 / 9.0)
    assert coef.k == pytest.approx([-1.0 / 9.0, -7.0 / 9.0])


@pytest.mark.parametrize("seed", [31, 32, 33])
def test_reduce_a_la_esperanza_exacta(seed):
    """Test E(σ_R²)(π, 0) = a1·π(1−π)"""
    pop = _partial_population(seed)
    coef = partial_r_coefficients(pop)
    m = compute_moments(pop)

    for pi in (0.1, 0.5, 0.8):
        value = expected_var_r(coef, pi, 0.0).value
        assert value == pytest.approx(exact_ratio_variance_gap(m, pi).exact, rel=1e-7)


def test_borde_pi_uno_es_cero():
    """Test E(σ_R²)(1, π_L) = 0"""
    coef = partial_r_coefficients(_partial_population(34))
    for pi_l in (0.0, 0.4, 1.0):
        assert expected_var_r(coef, 1.0, pi_l).value == pytest.approx(0.0, abs=1e-9 * coef.a1)


def test_suma_ponderada_de_k():
    """Test Σk_i·X_i = −τ_x^(2)/τ_x"""
    pop = _partial_population(35)
    coef = partial_r_coefficients(pop)
    x = pop.totals()

    tau, tau2 = x.sum(), (x ** 2).sum()
    assert float(np.dot(coef.k, x)) == pytest.approx(-tau2 / tau, rel=1e-9)


@pytest.mark.parametrize("seed", [36, 37, 38])
def test_conservadora_razon_domina_la_grilla(seed):
    """Test el máximo de E(σ_R²) supera a la superficie en toda la grilla"""
    coef = partial_r_coefficients(_partial_population(seed))

    prediction = conservative_variance_ratio(coef)

    assert prediction.conservative
    assert coef.evaluate(prediction.at_pi, prediction.at_pi_l) == pytest.approx(prediction.value)
    scale = coef.surface().scale
    for pi in GRID:
        for pi_l in GRID:
            assert coef.evaluate(pi, pi_l) <= prediction.value + 1e-9 * scale


# ===========================================
# POBLACIONES SIMULADAS Y ORÁCULOS
# ===========================================

@pytest.mark.parametrize("seed", range(50))
def test_razon_preferida_para_todo_pi_interior(seed):
    """Test P(razón mejor) > 0.5 para π = 0.01, 0.02, ..., 0.99"""
    pop = lognormal_population(700 + seed, 30)
    m = compute_moments(pop)
    groups = distinct_value_groups(pop)

    for pi in np.round(np.arange(0.01, 1.0, 0.01), 2).tolist():
        assert preference_probability(groups, m, pi).prob_ratio_better > 0.5


def test_normal_cerca_de_montecarlo_con_tarifario():
    """Test tarifario de 4 montos con 100 reclamos cada uno: normal a ≤ 3 errores estándar de 10⁵ réplicas"""
    pop = make_population([100.0] * 100 + [125.0] * 100 + [150.0] * 100 + [200.0] * 100)
    m = compute_moments(pop)

    normal = preference_probability(distinct_value_groups(pop), m, 0.5)
    simulated = preference_probability_exact(pop, 0.5, mode=PreferenceMethod.MONTE_CARLO, replicates=100_000, seed=11)

    assert normal.min_group_size == 100
    assert normal.normal_reliable
    assert 0.9 < normal.prob_ratio_better < 0.999
    assert abs(normal.prob_ratio_better - simulated.prob_ratio_better) <= 3.0 * simulated.mc_std_err


def test_clinic_maximo_de_razon_en_pi_medio_sin_errores_de_linea():
    """Test en clinic el máximo de E(σ_R²) está en (π, π_L) = (0.5, 0)"""
    coef = partial_r_coefficients(generate(synth_spec("clinic", 1)))

    best = conservative_variance_ratio(coef)
    table = {b["edge"]: b["value"] for b in best.diagnostics["boundaries"]}

    assert best.at_pi == pytest.approx(0.5, abs=1e-9)
    assert best.at_pi_l == 0.0
    assert table["pi=1"] == pytest.approx(0.0, abs=1e-9)
    assert table["pi_l=0"] == max(table.values())


def test_tamano_de_razon_maximo_en_pi_medio():
    """Test el n de razón sobre la rejilla de π es máximo en π = 0.5"""
    m = compute_moments(lognormal_population(88, 400))
    margin = 0.05 * m.tau_x

    sizes = {pi: sample_size(m, roberts_ratio_variance(m, pi), margin, 0.9, Estimator.RATIO).n for pi in GRID}

    assert sizes[0.5] == max(sizes.values())
    assert 2 < sizes[0.5] < m.n_pop
