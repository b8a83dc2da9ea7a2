"""
Subcomandos de simulación: simulate, coverage y verify
"""

import argparse
import logging
from pathlib import Path

from .design import add_estimator_argument, add_rate_arguments, predicted_variance
from ..core.dependencies import (
    add_confidence_argument,
    add_population_arguments,
    add_seed_argument,
    add_workers_argument,
    parse_currency,
    parse_probability,
    resolve_confidence,
    resolve_population,
    resolve_seed,
    resolve_workers,
    write_csv,
)
from ..core.router import CommandRouter
from ..modules.aon_design.models import AonModel
from ..modules.aon_design.services import sample_size
from ..modules.montecarlo.oracle import run_verification_suite
from ..modules.montecarlo.services import realize, simulate_estimation
from ..modules.partial_design.models import LineItemModel
from ..modules.population.services import compute_moments, write_claims_csv
from ..modules.synthpop.services import generate, synth_spec
from ..shared.exceptions import EXIT_INTERNAL, ValidationException
from ..shared.schemas import CommandResult, Estimator

logger = logging.getLogger(__name__)

router = CommandRouter()

COVERAGE_COLUMNS = ["estimator", "n", "pi", "pi_l", "nominal", "attained", "rmse"]
VERIFY_COLUMNS = [
    "population", "pi", "pi_l",
    "expected_var_y", "oracle_var_y", "expected_var_r", "oracle_var_r",
    "prob_exact", "oracle_prob",
]


# ===========================================
# SIMULATE
# ===========================================

def _simulate_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--synth", required=True, help="edwards, neter o clinic")
    add_seed_argument(parser)
    parser.add_argument("--size", type=int, default=None, help="N alternativo")
    parser.add_argument("--out", required=True, help="Archivo CSV de reclamos a escribir")


@router.command("simulate", help="Genera una población simulada en formato de reclamos",
                configure=_simulate_arguments)
def simulate(args: argparse.Namespace) -> CommandResult:
    pop = generate(synth_spec(args.synth, resolve_seed(args.seed), args.size))
    target = Path(args.out)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    path = write_claims_csv(pop, target)
    report = f"{args.synth}: {pop.n_pop} reclamos, {pop.n_lines} líneas -> {path}"
    return CommandResult(report=report, data_files=[str(path)])


# ===========================================
# COVERAGE
# ===========================================

def _coverage_arguments(parser: argparse.ArgumentParser) -> None:
    add_population_arguments(parser, with_seed=False)
    add_estimator_argument(parser)
    add_rate_arguments(parser)
    add_confidence_argument(parser)
    parser.add_argument("--n", type=int, default=None, help="Tamaño de muestra")
    parser.add_argument("--margin", default=None, help="Margen E: n se planifica con la varianza del modelo")
    parser.add_argument("--replicates", type=int, default=2000)
    add_seed_argument(parser)
    add_workers_argument(parser)
    parser.add_argument("--out", default=None, help="CSV de cobertura")


@router.command("coverage", help="Cobertura de los intervalos de confianza por Monte Carlo",
                configure=_coverage_arguments)
def coverage(args: argparse.Namespace) -> CommandResult:
    estimator = Estimator(args.estimator)
    confidence = resolve_confidence(args.confidence)
    seed = resolve_seed(args.seed)
    workers = resolve_workers(args.workers)
    pi = parse_probability(args.error_rate, "error_rate")
    pi_l = parse_probability(args.line_error_rate, "line_error_rate")
    if pi is None:
        raise ValidationException("falta la tasa de error (use --error-rate)", field="error_rate")
    if (args.n is None) == (args.margin is None):
        raise ValidationException("indique --n o --margin (solo uno)", field="n")

    pop = resolve_population(args)
    n = args.n
    if n is None:
        m = compute_moments(pop)
        variance = predicted_variance(pop, m, estimator, pi, pi_l)
        n = sample_size(m, variance, parse_currency(args.margin, "margin"), confidence, estimator).n

    model = AonModel(pi=pi) if pi_l is None else LineItemModel(pi=pi, pi_l=pi_l)
    realized = realize(pop, model, seed)
    report = simulate_estimation(realized, n, estimator, confidence, args.replicates, seed, workers)

    lines = [
        f"estimador = {estimator.value}, n = {report.n}, réplicas = {report.replicates}",
        f"τ_y realizado = {report.tau_y:.2f}",
        f"cobertura = {report.attained:.4f} (nominal {report.nominal})",
        f"margen medio = {report.mean_margin:.2f}, rmse = {report.rmse:.2f}",
        f"G1 de Y = {report.skew_g1_y:.4f}",
    ]
    if report.skew_flag:
        lines.append("advertencia: asimetría alta para n; la cobertura normal puede quedar bajo el nominal")

    data_files = []
    if args.out:
        row = {column: getattr(report, column) for column in COVERAGE_COLUMNS}
        row["estimator"] = report.estimator.value
        data_files.append(write_csv([row], COVERAGE_COLUMNS, args.out))
    return CommandResult(report="\n".join(lines), data_files=data_files)


# ===========================================
# VERIFY
# ===========================================

def _verify_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mini-populations", type=int, default=100)
    add_seed_argument(parser)
    add_workers_argument(parser)
    parser.add_argument("--out", default=None, help="CSV con cada comparación")


@router.command("verify", help="Equivalencia de las fórmulas cerradas con el oráculo exhaustivo",
                configure=_verify_arguments)
def verify(args: argparse.Namespace) -> CommandResult:
    result = run_verification_suite(
        args.mini_populations, resolve_seed(args.seed), workers=resolve_workers(args.workers)
    )
    lines = [
        f"poblaciones = {result.populations}, comparaciones = {result.checks}",
        f"error relativo máx E(σ_y²) = {result.max_rel_error_y:.3e}",
        f"error relativo máx E(σ_R²) = {result.max_rel_error_r:.3e}",
        f"fórmula de Roberts para σ_R² vs valor exacto: {result.ratio_formula_findings} diferencias "
        f"(máx {result.max_ratio_formula_gap:.6g}, explicadas por G1 ≠ 0)",
    ]
    lines += result.failures
    lines.append("OK" if result.passed else f"FALLA: {len(result.failures)} comparaciones fuera de tolerancia")

    data_files = []
    if args.out:
        data_files.append(write_csv([row.model_dump() for row in result.rows], VERIFY_COLUMNS, args.out))
    return CommandResult(
        exit_code=0 if result.passed else EXIT_INTERNAL,
        report="\n".join(lines),
        data_files=data_files,
    )
