"""
Subcomandos de diseño: moments, plan, compare y conservative
"""

import argparse
import logging
from typing import List, Optional

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
)
from ..core.router import CommandRouter
from ..modules.aon_design.models import VariancePrediction
from ..modules.aon_design.services import (
    conservative_variance_aon,
    pi_crit,
    roberts_variance,
    sample_size,
)
from ..modules.partial_design.services import (
    conservative_variance_partial,
    expected_var_y,
    partial_y_coefficients,
)
from ..modules.population.models import ClaimPopulation, PopulationMoments
from ..modules.population.services import compute_moments, distinct_value_groups
from ..modules.ratio_design.models import PreferenceMethod
from ..modules.ratio_design.services import (
    conservative_variance_ratio,
    conservative_variance_ratio_aon,
    expected_var_r,
    partial_r_coefficients,
    preference_probability,
    preference_probability_exact,
    roberts_ratio_variance,
    zero_error_fallback_variance,
)
from ..shared.exceptions import ValidationException
from ..shared.schemas import CommandResult, Estimator

logger = logging.getLogger(__name__)

router = CommandRouter()


def add_estimator_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--estimator",
        choices=[e.value for e in Estimator],
        default=Estimator.SIMPLE_EXPANSION.value,
        help="Estimador del total de montos en error",
    )


def add_rate_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--error-rate", default=None, help="Tasa de error por reclamo π")
    parser.add_argument("--line-error-rate", default=None, help="Tasa de error por línea π_L")


def predicted_variance(
    pop: ClaimPopulation,
    m: PopulationMoments,
    estimator: Estimator,
    pi: float,
    pi_l: Optional[float],
) -> VariancePrediction:
    """
    Varianza predicha en (π, π_L)

    Sin π_L se usa el modelo todo-o-nada (Roberts para σ_y² y σ_R²); con π_L,
    las superficies de errores parciales.
    """
    if estimator == Estimator.RATIO:
        if pi_l is None:
            return roberts_ratio_variance(m, pi)
        return expected_var_r(partial_r_coefficients(pop), pi, pi_l)
    if pi_l is None:
        return roberts_variance(m, pi)
    return expected_var_y(partial_y_coefficients(pop), pi, pi_l)


def _format_pair(pi: float, pi_l: Optional[float]) -> str:
    return f"π={pi:.6f}" if pi_l is None else f"π={pi:.6f}, π_L={pi_l:.6f}"


# ===========================================
# MOMENTS
# ===========================================

@router.command("moments", help="Momentos poblacionales y π_crit", configure=add_population_arguments)
def moments(args: argparse.Namespace) -> CommandResult:
    pop = resolve_population(args)
    m = compute_moments(pop)
    groups = distinct_value_groups(pop, m)
    critical = pi_crit(m)

    lines = [
        f"N = {m.n_pop}",
        f"líneas = {pop.n_lines}",
        f"τ_x = {m.tau_x:.2f}",
        f"μ_x = {m.mu_x:.6f}",
        f"σ_x² = {m.sigma2_x:.6f}",
        f"μ_x^(2) = {m.mu_x2:.6f}",
        f"G1 = {m.g1_skew:.6f}",
        f"valores distintos = {groups.n_distinct} (min N_l = {groups.min_count})",
        f"errores parciales = {'sí' if pop.has_partial_errors else 'no'}",
    ]
    if critical.value is None:
        lines.append("π_crit = sin punto crítico (h es convexa o lineal)")
    else:
        where = "interior" if critical.interior else "fuera de [0, 1]"
        lines.append(f"π_crit = {critical.value:.6f} ({where}); aproximación N grande {critical.large_n_approx:.6f}")
    return CommandResult(report="\n".join(lines))


# ===========================================
# PLAN
# ===========================================

def _plan_arguments(parser: argparse.ArgumentParser) -> None:
    add_population_arguments(parser)
    add_estimator_argument(parser)
    add_rate_arguments(parser)
    add_confidence_argument(parser)
    parser.add_argument("--margin", required=True, help="Margen de error E en dólares")
    parser.add_argument("--conservative", action="store_true", help="Maximizar la varianza sobre (π, π_L)")
    parser.add_argument("--all-or-nothing", action="store_true", help="Con --conservative: solo errores todo-o-nada")
    parser.add_argument("--zero-errors", type=int, default=None,
                        help="Razón: n de una muestra previa sin errores (usa la cota exacta de π)")


def _plan_variance(args: argparse.Namespace, pop: ClaimPopulation, m: PopulationMoments,
                   estimator: Estimator, confidence: float) -> VariancePrediction:
    pi = parse_probability(args.error_rate, "error_rate")
    pi_l = parse_probability(args.line_error_rate, "line_error_rate")

    if args.zero_errors is not None:
        if estimator != Estimator.RATIO:
            raise ValidationException("solo aplica al estimador de razón", field="zero_errors")
        if args.conservative or pi is not None or pi_l is not None:
            raise ValidationException("no se combina con --conservative ni con tasas de error", field="zero_errors")
        return zero_error_fallback_variance(m, args.zero_errors, confidence)

    if args.conservative:
        if pi is not None or pi_l is not None:
            raise ValidationException("--conservative no se combina con --error-rate ni --line-error-rate",
                                      field="error_rate")
        if args.all_or_nothing:
            if estimator == Estimator.RATIO:
                return conservative_variance_ratio_aon(m)
            return conservative_variance_aon(m)
        if estimator == Estimator.RATIO:
            return conservative_variance_ratio(partial_r_coefficients(pop))
        return conservative_variance_partial(partial_y_coefficients(pop), m)

    if args.all_or_nothing:
        raise ValidationException("--all-or-nothing requiere --conservative", field="all_or_nothing")
    if pi is None:
        raise ValidationException("falta la tasa de error (use --error-rate o --conservative)", field="error_rate")
    return predicted_variance(pop, m, estimator, pi, pi_l)


@router.command("plan", help="Tamaño de muestra para un margen de error", configure=_plan_arguments)
def plan(args: argparse.Namespace) -> CommandResult:
    estimator = Estimator(args.estimator)
    confidence = resolve_confidence(args.confidence)
    margin = parse_currency(args.margin, "margin")
    pop = resolve_population(args)
    m = compute_moments(pop)

    variance = _plan_variance(args, pop, m, estimator, confidence)
    result = sample_size(m, variance, margin, confidence, estimator)

    lines = [
        f"estimador = {estimator.value}",
        f"n = {result.n}",
        f"N = {m.n_pop}",
        f"varianza = {result.variance:.6f} ({variance.kind.value})",
        f"evaluada en {_format_pair(variance.at_pi, variance.at_pi_l)}",
        f"margen = {margin:.2f}, confianza = {confidence}, z = {result.z:.6f}",
        f"n sin redondear = {result.formula_value:.6f}",
    ]
    if variance.conservative and len(variance.argmaxes) > 1:
        ties = "; ".join(_format_pair(p, pl) for p, pl in variance.argmaxes)
        lines.append(f"máximos empatados: {ties}")
    if "zero_error_bound" in variance.diagnostics:
        lines.append(f"cota de π sin errores = {variance.diagnostics['zero_error_bound']:.6f}")
    if result.census_required:
        lines.append("el margen pedido exige un censo")
    return CommandResult(report="\n".join(lines))


# ===========================================
# COMPARE
# ===========================================

def _compare_arguments(parser: argparse.ArgumentParser) -> None:
    add_population_arguments(parser, with_seed=False)
    parser.add_argument("--error-rate", required=True, help="Tasa de error por reclamo π")
    parser.add_argument("--method", choices=[p.value for p in PreferenceMethod],
                        default=PreferenceMethod.NORMAL_APPROX.value)
    parser.add_argument("--replicates", type=int, default=100000, help="Réplicas para monte_carlo")
    add_seed_argument(parser, required=False)
    add_workers_argument(parser)


@router.command("compare", help="Confianza en que la razón supere a la expansión simple",
                configure=_compare_arguments)
def compare(args: argparse.Namespace) -> CommandResult:
    pi = parse_probability(args.error_rate, "error_rate")
    method = PreferenceMethod(args.method)
    pop = resolve_population(args)

    if method == PreferenceMethod.NORMAL_APPROX:
        m = compute_moments(pop)
        report = preference_probability(distinct_value_groups(pop, m), m, pi)
    else:
        seed = resolve_seed(args.seed) if method == PreferenceMethod.MONTE_CARLO else 0
        report = preference_probability_exact(
            pop, pi, mode=method, replicates=args.replicates, seed=seed, workers=resolve_workers(args.workers)
        )

    lines = [
        f"π = {report.pi}",
        f"P(razón mejor) = {report.prob_ratio_better:.6f} ({report.method.value})",
        f"E(g) = {report.mean_g:.6f}, Var(g) = {report.var_g:.6f}",
    ]
    if report.mc_std_err is not None:
        lines.append(f"error estándar MC = {report.mc_std_err:.6f} ({report.replicates} réplicas)")
    if report.degenerate:
        lines.append("valor límite (π ∈ {0, 1} o σ_x² = 0)")
    if report.normal_reliable is False:
        lines.append(f"advertencia: min N_l = {report.min_group_size}; la aproximación normal puede fallar")
    return CommandResult(report="\n".join(lines))


# ===========================================
# CONSERVATIVE
# ===========================================

def _boundary_lines(title: str, prediction: VariancePrediction) -> List[str]:
    lines = [title, f"  máximo = {prediction.value:.6f} en {_format_pair(prediction.at_pi, prediction.at_pi_l)}"]
    for boundary in prediction.diagnostics.get("boundaries", []):
        lines.append(
            f"  borde {boundary['edge']}: {boundary['value']:.6f} en "
            f"{_format_pair(boundary['pi'], boundary['pi_l'])}"
        )
    for candidate in prediction.diagnostics.get("interior", []):
        state = "aceptado" if candidate["accepted"] else f"rechazado ({candidate['reason']})"
        where = f"π_L={candidate['pi_l']:.6f}"
        if candidate["pi"] is not None:
            where += f" π={candidate['pi']:.6f}"
        if candidate["value"] is not None:
            where += f": {candidate['value']:.6f}"
        lines.append(f"  interior {where} {state}")
    if prediction.diagnostics.get("degenerate_cubic"):
        lines.append("  cúbica degenerada (idénticamente nula)")
    return lines


@router.command("conservative", help="Máximos de E(σ_y²) y E(σ_R²) con tablas de bordes",
                configure=add_population_arguments)
def conservative(args: argparse.Namespace) -> CommandResult:
    pop = resolve_population(args)
    m = compute_moments(pop)

    aon_y = conservative_variance_aon(m)
    aon_r = conservative_variance_ratio_aon(m)
    partial_y = conservative_variance_partial(partial_y_coefficients(pop), m)
    partial_r = conservative_variance_ratio(partial_r_coefficients(pop))

    lines = [
        "Todo-o-nada",
        f"  σ_y²: {aon_y.value:.6f} en π={aon_y.at_pi:.6f}",
        f"  σ_R²: {aon_r.value:.6f} en π={aon_r.at_pi:.6f}",
    ]
    lines += _boundary_lines("E(σ_y²) con errores parciales", partial_y)
    lines += _boundary_lines("E(σ_R²) con errores parciales", partial_r)
    return CommandResult(report="\n".join(lines))
