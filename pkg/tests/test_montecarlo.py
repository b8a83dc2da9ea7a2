"""
Tests de simulación: realización de errores, cobertura de intervalos y oráculo exhaustivo
"""
import numpy as np
import pytest

from conftest import lognormal_population, make_multiline, make_population

from app.modules.aon_design import roberts_variance, sample_size
from app.modules.aon_design.models import AonModel
from app.modules.montecarlo import (
    oracle_expectations,
    random_mini_population,
    realize,
    run_verification_suite,
    simulate_estimation,
)
from app.modules.partial_design import expected_var_y, partial_y_coefficients
from app.modules.partial_design.models import LineItemModel
from app.modules.population import compute_moments
from app.modules.ratio_design import expected_var_r, partial_r_coefficients
from app.modules.synthpop import generate, synth_spec
from app.shared.exceptions import OracleCapacityException, ValidationException
from app.shared.random import make_generator
from app.shared.schemas import Estimator


@pytest.fixture
def multiline():
    """Tres reclamos con errores parciales por línea"""
    return make_multiline([[(45.0, 5.0), (6.0, 6.0)], [(17.0, 17.0)], [(30.0, 12.5), (2.0, 0.0)]])


# ===========================================
# REALIZACIÓN
# ===========================================

def test_realizar_sin_errores(multiline):
    """Test π = 0 y π_L = 0 dan Y = 0"""
    rp = realize(multiline, AonModel(pi=0.0), seed=1)

    assert rp.y_cents == [0, 0, 0]
    assert rp.tau_y == 0.0
    assert rp.pi_l is None


def test_realizar_todo_en_error(multiline):
    """Test π = 1 da Y = X"""
    rp = realize(multiline, AonModel(pi=1.0), seed=1)
    assert rp.y_cents == multiline.totals_cents().tolist()


def test_realizar_todas_las_lineas(multiline):
    """Test π = 0 y π_L = 1 dan Y = X̃"""
    rp = realize(multiline, LineItemModel(pi=0.0, pi_l=1.0), seed=1)

    assert rp.y_cents == multiline.error_totals_cents().tolist()
    assert rp.pi == 0.0 and rp.pi_l == 1.0


def test_realizar_reproducible():
    """Test misma semilla, mismos Y; Y_i entre 0 y X_i"""
    pop = lognormal_population(51, 200)
    model = LineItemModel(pi=0.3, pi_l=0.5)

    first = realize(pop, model, seed=77)
    again = realize(pop, model, seed=77)
    other = realize(pop, model, seed=78)

    assert first.y_cents == again.y_cents
    assert first.y_cents != other.y_cents
    assert all(0 <= y <= x for y, x in zip(first.y_cents, pop.totals_cents().tolist()))


def test_realizar_frecuencia_de_error():
    """Test la fracción de reclamos en error se acerca a π"""
    pop = make_population([10.0] * 4000)

    rp = realize(pop, AonModel(pi=0.25), seed=9)

    share = sum(1 for y in rp.y_cents if y > 0) / 4000
    assert share == pytest.approx(0.25, abs=0.03)


# ===========================================
# COBERTURA
# ===========================================

@pytest.mark.parametrize("estimator", [Estimator.SIMPLE_EXPANSION, Estimator.RATIO])
def test_censo_cubre_siempre(estimator):
    """Test n = N: el estimador es exacto y todas las réplicas cubren"""
    pop = lognormal_population(52, 30)
    rp = realize(pop, AonModel(pi=0.4), seed=3)

    report = simulate_estimation(rp, 30, estimator, 0.9, replicates=20, seed=4)

    assert report.attained == 1.0
    assert report.rmse == pytest.approx(0.0, abs=1e-6)
    assert report.mean_margin == 0.0


def test_cobertura_independiente_de_workers():
    """Test el reporte es idéntico con 1 y 3 workers"""
    pop = lognormal_population(53, 150)
    rp = realize(pop, LineItemModel(pi=0.2, pi_l=0.4), seed=5)

    single = simulate_estimation(rp, 40, Estimator.RATIO, 0.9, replicates=1200, seed=6, workers=1)
    threaded = simulate_estimation(rp, 40, Estimator.RATIO, 0.9, replicates=1200, seed=6, workers=3)

    assert single == threaded


def test_cobertura_cercana_al_nivel_nominal():
    """Test MAS con n = 100 de N = 400 y π = 0.5"""
    pop = lognormal_population(54, 400, sigma=0.5)
    rp = realize(pop, AonModel(pi=0.5), seed=7)

    report = simulate_estimation(rp, 100, Estimator.SIMPLE_EXPANSION, 0.9, replicates=600, seed=8)

    assert report.attained <= 0.97
    assert report.attained >= 0.80 or report.skew_flag
    assert report.pi == 0.5
    assert report.nominal == 0.9
    assert report.tau_y == pytest.approx(rp.tau_y)


def test_cobertura_edwards_cerca_del_nominal():
    """Test edwards con π = 0.3, E = $110,000 y 90 %: cobertura en [0.85, 0.93] o asimetría señalada"""
    pop = generate(synth_spec("edwards", 7))
    m = compute_moments(pop)
    n = sample_size(m, roberts_variance(m, 0.3), 110_000.0, 0.9).n
    realized = realize(pop, AonModel(pi=0.3), 7)

    report = simulate_estimation(realized, n, Estimator.SIMPLE_EXPANSION, 0.9, replicates=2000, seed=7, workers=4)

    assert 30 < n < 200
    assert 0.85 <= report.attained <= 0.93 or (report.attained < 0.85 and report.skew_flag)


@pytest.mark.parametrize("n,replicates", [(1, 10), (31, 10), (10, 0)])
def test_cobertura_parametros_invalidos(n, replicates):
    """Test n fuera de [2, N] o réplicas < 1"""
    rp = realize(lognormal_population(55, 30), AonModel(pi=0.5), seed=1)
    with pytest.raises(ValidationException):
        simulate_estimation(rp, n, Estimator.SIMPLE_EXPANSION, 0.9, replicates=replicates, seed=1)


# ===========================================
# ORÁCULO EXHAUSTIVO
# ===========================================

def test_oraculo_dos_reclamos(two_claims):
    """Test E(σ_y²) = 37.5, E(σ_R²) = 22.22 y P(g > 0) = 0.5 en (0.5, 0)"""
    oracle = oracle_expectations(two_claims, 0.5, 0.0)

    assert oracle.e_sigma_y2 == pytest.approx(37.5)
    assert oracle.e_sigma_r2 == pytest.approx(200.0 / 9.0)
    assert oracle.p_g_positive == pytest.approx(0.5)
    assert oracle.vectors == 16


def test_oraculo_coincide_con_las_superficies(multiline):
    """Test las fórmulas cerradas coinciden con la enumeración"""
    coef_y = partial_y_coefficients(multiline)
    coef_r = partial_r_coefficients(multiline)

    for pi, pi_l in ((0.3, 0.6), (0.8, 0.1), (0.05, 0.95)):
        oracle = oracle_expectations(multiline, pi, pi_l)
        assert expected_var_y(coef_y, pi, pi_l).value == pytest.approx(oracle.e_sigma_y2, rel=1e-9)
        assert expected_var_r(coef_r, pi, pi_l).value == pytest.approx(oracle.e_sigma_r2, rel=1e-9)


def test_oraculo_excede_capacidad():
    """Test 2^(N+L) > 4096 vectores"""
    with pytest.raises(OracleCapacityException):
        oracle_expectations(make_population([float(x) for x in range(1, 8)]), 0.5, 0.5)


@pytest.mark.parametrize("stream", range(20))
def test_poblaciones_minimas(stream):
    """Test N ≤ 4, 1 a 3 líneas por reclamo, a lo sumo 8 líneas y montos enteros"""
    pop = random_mini_population(make_generator(2024, 99, stream))

    assert 1 <= pop.n_pop <= 4
    assert pop.n_lines <= 8
    for claim in pop.claims:
        assert 1 <= len(claim.lines) <= 3
        for line in claim.lines:
            assert line.claimed_amount % 100 == 0
            assert 100 <= line.claimed_amount <= 10000
            assert line.probable_error_amount % 100 == 0


# ===========================================
# SUITE DE VERIFICACIÓN
# ===========================================

def test_suite_de_verificacion():
    """Test cinco poblaciones sin fallas y con el conteo de comparaciones"""
    report = run_verification_suite(5, seed=42)

    assert report.passed, report.failures
    assert report.populations == 5
    assert len(report.rows) == 5 * 25
    assert report.checks == 5 * 25 * 3 + 5 * 5 * 3
    assert report.max_rel_error_y <= 1e-9
    assert report.max_rel_error_r <= 1e-9


def test_suite_independiente_de_workers():
    """Test mismas filas con 1 y 2 workers"""
    assert run_verification_suite(12, seed=7, workers=1) == run_verification_suite(12, seed=7, workers=2)


def test_suite_sin_poblaciones():
    """Test n < 1"""
    with pytest.raises(ValidationException):
        run_verification_suite(0, seed=1)
