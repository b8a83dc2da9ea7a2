"""
Subcomando stratify: cortes óptimos y asignación por estratos
"""

import argparse
import logging

from .design import add_estimator_argument, add_rate_arguments
from ..core.dependencies import (
    add_population_arguments,
    add_workers_argument,
    parse_probability,
    resolve_population,
    resolve_workers,
    write_csv,
)
from ..core.router import CommandRouter
from ..modules.aon_design.models import AonModel
from ..modules.partial_design.models import LineItemModel
from ..modules.stratified.models import AllocationMethod
from ..modules.stratified.services import build_plan, optimize_breakpoints
from ..shared.exceptions import ValidationException
from ..shared.schemas import CommandResult, Estimator

logger = logging.getLogger(__name__)

router = CommandRouter()

STRATA_COLUMNS = ["stratum", "low", "high", "n_pop", "predicted_variance", "n_alloc"]


def _stratify_arguments(parser: argparse.ArgumentParser) -> None:
    add_population_arguments(parser)
    add_estimator_argument(parser)
    add_rate_arguments(parser)
    parser.add_argument("--strata", type=int, default=None, help="Número de estratos L")
    parser.add_argument("--breakpoints", default=None, help="Cortes dados en dólares, separados por coma")
    parser.add_argument("--n-total", type=int, required=True, help="Tamaño total de muestra")
    parser.add_argument("--allocation", choices=[a.value for a in AllocationMethod],
                        default=AllocationMethod.NEYMAN.value)
    parser.add_argument("--out", default=None, help="CSV con el detalle por estrato")
    add_workers_argument(parser)


def _parse_breakpoints(text: str):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValidationException("deben ser montos decimales separados por coma", field="breakpoints", value=text)


@router.command("stratify", help="Cortes por total de reclamo que minimizan la varianza estratificada",
                configure=_stratify_arguments)
def stratify(args: argparse.Namespace) -> CommandResult:
    estimator = Estimator(args.estimator)
    allocation = AllocationMethod(args.allocation)
    pi = parse_probability(args.error_rate, "error_rate")
    pi_l = parse_probability(args.line_error_rate, "line_error_rate")
    if pi is None:
        raise ValidationException("falta la tasa de error (use --error-rate)", field="error_rate")
    if (args.strata is None) == (args.breakpoints is None):
        raise ValidationException("indique --strata o --breakpoints (solo uno)", field="strata")
    model = AonModel(pi=pi) if pi_l is None else LineItemModel(pi=pi, pi_l=pi_l)

    pop = resolve_population(args)
    if args.breakpoints is not None:
        plan = build_plan(pop, _parse_breakpoints(args.breakpoints), estimator, model, args.n_total, allocation)
    else:
        plan = optimize_breakpoints(
            pop, args.strata, estimator, model, args.n_total, allocation, workers=resolve_workers(args.workers)
        )

    lines = [
        f"estimador = {estimator.value}, asignación = {plan.allocation.value}, búsqueda = {plan.search or 'dada'}",
        "cortes = " + ", ".join(f"{b:.2f}" for b in plan.breakpoints),
        f"varianza del total = {plan.total_variance:.6f}",
    ]
    rows = []
    for stratum in plan.per_stratum:
        low = "-∞" if stratum.low is None else f"{stratum.low:.2f}"
        high = "+∞" if stratum.high is None else f"{stratum.high:.2f}"
        lines.append(
            f"  estrato {stratum.index}: [{low}, {high}) N_h={stratum.n_pop} n_h={stratum.n_alloc} "
            f"σ̂_h²={stratum.predicted_variance:.6f}"
        )
        rows.append({
            "stratum": stratum.index,
            "low": stratum.low,
            "high": stratum.high,
            "n_pop": stratum.n_pop,
            "predicted_variance": stratum.predicted_variance,
            "n_alloc": stratum.n_alloc,
        })

    data_files = [write_csv(rows, STRATA_COLUMNS, args.out)] if args.out else []
    return CommandResult(report="\n".join(lines), data_files=data_files)
