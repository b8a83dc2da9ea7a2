"""
Tests del módulo de población: archivo de reclamos, momentos y grupos de valores
"""
import pytest

from conftest import make_multiline, make_population, lognormal_population

from app.modules.population import (
    EmptyPopulationException,
    PopulationValidationException,
    PowerSums,
    compute_moments,
    compute_power_sums,
    distinct_value_groups,
    parse_claims_csv,
    write_claims_csv,
)
from app.modules.population.utils import dollars_to_cents, format_cents, parse_amount
from app.shared.exceptions import EXIT_VALIDATION


# ===========================================
# ARCHIVO DE RECLAMOS
# ===========================================

def test_parse_reclamo_de_tres_lineas(claims_file):
    """Test un reclamo con tres líneas: X = 68.00 y X̃ = 28.00"""
    path = claims_file("C1,1,45.00,5.00\nC1,2,6.00,6.00\nC1,3,17.00,17.00\n")

    pop = parse_claims_csv(path)

    assert pop.n_pop == 1
    assert pop.n_lines == 3
    claim = pop.claims[0]
    assert claim.total == 6800
    assert claim.probable_error_total == 2800
    assert pop.has_partial_errors


def test_parse_agrupa_filas_no_contiguas(claims_file):
    """Test filas de un reclamo separadas; las líneas se ordenan por line_index"""
    path = claims_file("A,2,3.00,0.00\nB,1,5.00,5.00\nA,1,1.00,1.00\n")

    pop = parse_claims_csv(path)

    assert [c.claim_id for c in pop.claims] == ["A", "B"]
    assert [line.claimed_amount for line in pop.claims[0].lines] == [100, 300]


def test_parse_poblacion_vacia(claims_file):
    """Test archivo con solo encabezado"""
    with pytest.raises(EmptyPopulationException, match="población vacía"):
        parse_claims_csv(claims_file(""))


def test_parse_error_mayor_que_monto(claims_file):
    """Test monto de error 50.00 mayor que el reclamado 45.00"""
    path = claims_file("C1,1,10.00,1.00\nC1,2,45.00,50.00\n")

    with pytest.raises(PopulationValidationException) as info:
        parse_claims_csv(path)

    assert info.value.line_number == 3
    assert "Línea 3" in info.value.message
    assert info.value.exit_code == EXIT_VALIDATION


def test_parse_monto_negativo(claims_file):
    """Test monto negativo"""
    with pytest.raises(PopulationValidationException, match="negativo"):
        parse_claims_csv(claims_file("C1,1,-5.00,0.00\n"))


def test_parse_monto_sin_dos_decimales(claims_file):
    """Test monto con un solo decimal"""
    with pytest.raises(PopulationValidationException, match="dos decimales"):
        parse_claims_csv(claims_file("C1,1,45.0,0.00\n"))


def test_parse_linea_duplicada(claims_file):
    """Test (claim_id, line_index) repetido"""
    with pytest.raises(PopulationValidationException) as info:
        parse_claims_csv(claims_file("C1,1,5.00,0.00\nC1,1,6.00,0.00\n"))
    assert info.value.line_number == 3


def test_parse_encabezado_invalido(claims_file):
    """Test encabezado distinto del esperado"""
    with pytest.raises(PopulationValidationException) as info:
        parse_claims_csv(claims_file("C1,1,5.00,0.00\n", header="id,line,amount,error\n"))
    assert info.value.line_number == 1


def test_parse_total_cero(claims_file):
    """Test reclamo con total cero"""
    with pytest.raises(PopulationValidationException, match="positivo"):
        parse_claims_csv(claims_file("C1,1,0.00,0.00\n"))


def test_escritura_y_lectura_sin_perdida(tmp_path):
    """Test los montos en centavos sobreviven a escribir y volver a leer"""
    pop = make_multiline([[(45.0, 5.0), (6.0, 6.0), (17.0, 17.0)], [(0.01, 0.0)], [(1234.56, 99.99)]])
    path = write_claims_csv(pop, tmp_path / "out.csv")

    again = parse_claims_csv(path)

    assert again == pop


def test_utilidades_de_montos():
    """Test conversión de montos"""
    assert parse_amount("45.00") == 4500
    assert parse_amount("0.07") == 7
    assert format_cents(6800) == "68.00"
    assert format_cents(5) == "0.05"
    assert dollars_to_cents("110000") == 11000000
    assert dollars_to_cents("0.125") == 13
    with pytest.raises(ValueError):
        parse_amount("1.5")


# ===========================================
# MOMENTOS
# ===========================================

def test_momentos_dos_reclamos(two_claims):
    """Test X = {10, 20}"""
    m = compute_moments(two_claims)

    assert m.n_pop == 2
    assert m.mu_x == pytest.approx(15.0)
    assert m.sigma2_x == pytest.approx(25.0)
    assert m.mu_x2 == pytest.approx(250.0)
    assert m.tau_x == pytest.approx(30.0)
    assert m.tau_x2 == pytest.approx(500.0)
    assert m.g1_skew == 0.0


def test_momentos_poblacion_constante():
    """Test X = {c, c, c}"""
    m = compute_moments(make_population([12.34, 12.34, 12.34]))

    assert m.sigma2_x == 0.0
    assert m.g1_skew == 0.0


def test_momentos_uno_dos_tres():
    """Test X = {1, 2, 3}"""
    m = compute_moments(make_population([1.0, 2.0, 3.0]))

    assert m.mu_x2 == pytest.approx(14.0 / 3.0, rel=1e-12)
    assert m.mu_x ** 2 == pytest.approx(4.0, rel=1e-12)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_identidad_de_varianza(seed):
    """Test σ_x² = μ_x^(2) − μ_x² y μ_x^(2) ≥ μ_x²"""
    m = compute_moments(lognormal_population(seed, 300))

    assert m.sigma2_x == pytest.approx(m.mu_x2 - m.mu_x ** 2, rel=1e-9)
    assert m.mu_x2 >= m.mu_x ** 2


def test_asimetria_positiva():
    """Test G1 > 0 con un valor extremo a la derecha"""
    m = compute_moments(make_population([1.0, 1.0, 1.0, 10.0]))
    assert m.g1_skew > 0


def test_sumas_de_potencias_aditivas():
    """Test las sumas de dos mitades dan la suma total"""
    pop = make_multiline([[(5.0, 1.0), (3.0, 3.0)], [(7.0, 0.0)], [(2.0, 2.0), (2.0, 1.0), (1.0, 0.5)]])
    first = sum((PowerSums.of_claim(c) for c in pop.claims[:1]), PowerSums())
    rest = sum((PowerSums.of_claim(c) for c in pop.claims[1:]), PowerSums())

    total = compute_power_sums(pop)

    assert first + rest == total
    assert total - rest == first
    assert total.n == 3
    assert total.sx == 2000


# ===========================================
# GRUPOS DE VALORES DISTINTOS
# ===========================================

def test_grupos_con_repetidos():
    """Test X = {10, 10, 20} con μ_x = 40/3"""
    groups = distinct_value_groups(make_population([10.0, 20.0, 10.0]))

    assert [(g.distinct_value, g.count) for g in groups.groups] == [(10.0, 2), (20.0, 1)]
    shift = 40.0 / 3.0 + (200.0 / 9.0) / (80.0 / 3.0)
    assert groups.groups[0].c_value == pytest.approx(10.0 * (10.0 - shift))
    assert groups.groups[1].c_value == pytest.approx(20.0 * (20.0 - shift))
    assert groups.min_count == 1


def test_grupos_dos_reclamos(two_claims):
    """Test c = (−58.333…, 83.333…) para X = {10, 20}"""
    groups = distinct_value_groups(two_claims)

    assert groups.groups[0].c_value == pytest.approx(-175.0 / 3.0)
    assert groups.groups[1].c_value == pytest.approx(250.0 / 3.0)


def test_grupos_poblacion_constante():
    """Test un solo grupo con c = 0"""
    groups = distinct_value_groups(make_population([8.0, 8.0, 8.0]))

    assert groups.n_distinct == 1
    assert groups.groups[0].c_value == 0.0


def test_grupos_cubren_la_poblacion():
    """Test ΣN_l = N, ΣN_l·X_(l) = τ_x y la media de c_i es σ_x²/2"""
    pop = lognormal_population(5, 200, sigma=0.5)
    m = compute_moments(pop)
    groups = distinct_value_groups(pop, m)

    assert sum(g.count for g in groups.groups) == m.n_pop
    assert sum(g.count * g.distinct_value for g in groups.groups) == pytest.approx(m.tau_x, rel=1e-12)
    mean_c = sum(g.count * g.c_value for g in groups.groups) / m.n_pop
    assert mean_c == pytest.approx(m.sigma2_x / 2.0, rel=1e-9)
    values = [g.distinct_value for g in groups.groups]
    assert values == sorted(set(values))
