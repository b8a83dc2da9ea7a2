"""
Subcomando curves: datos para gráficos en CSV
"""

import argparse
import logging

import numpy as np

from .design import predicted_variance
from ..core.dependencies import (
    add_confidence_argument,
    add_population_arguments,
    parse_currency,
    parse_probability,
    resolve_confidence,
    resolve_population,
    write_csv,
)
from ..core.router import CommandRouter
from ..modules.aon_design.services import sample_size
from ..modules.partial_design.services import expected_var_y, partial_y_coefficients
from ..modules.population.services import compute_moments, distinct_value_groups
from ..modules.ratio_design.services import expected_var_r, partial_r_coefficients, preference_probability
from ..shared.exceptions import ValidationException
from ..shared.schemas import CommandResult, Estimator

logger = logging.getLogger(__name__)

router = CommandRouter()

CURVE_COLUMNS = {
    "samplesize": ["pi", "n_simple_expansion", "n_ratio"],
    "preference": ["pi", "prob_ratio_better"],
    "cross-sections": ["pi", "pi_l", "expected_var_y", "expected_var_r"],
}


def _curves_arguments(parser: argparse.ArgumentParser) -> None:
    add_population_arguments(parser)
    parser.add_argument("--kind", choices=list(CURVE_COLUMNS), required=True)
    parser.add_argument("--out", required=True, help="CSV de salida")
    parser.add_argument("--grid", type=int, default=101, help="Puntos de la grilla en [0, 1]")
    parser.add_argument("--margin", default=None, help="samplesize: margen E en dólares")
    parser.add_argument("--line-error-rate", default=None, help="samplesize: π_L fija (errores parciales)")
    add_confidence_argument(parser)


def _grid(points: int) -> np.ndarray:
    if points < 2:
        raise ValidationException("debe ser al menos 2", field="grid", value=points)
    return np.linspace(0.0, 1.0, points)


@router.command("curves", help="Curvas de tamaño de muestra, preferencia y cortes de E(σ²)",
                configure=_curves_arguments)
def curves(args: argparse.Namespace) -> CommandResult:
    grid = _grid(args.grid)
    pop = resolve_population(args)
    m = compute_moments(pop)
    rows = []

    if args.kind == "samplesize":
        margin = parse_currency(args.margin, "margin")
        if margin is None:
            raise ValidationException("es obligatorio para --kind samplesize", field="margin")
        confidence = resolve_confidence(args.confidence)
        pi_l = parse_probability(args.line_error_rate, "line_error_rate")
        for pi in grid.tolist():
            row = {"pi": pi}
            for estimator, column in ((Estimator.SIMPLE_EXPANSION, "n_simple_expansion"), (Estimator.RATIO, "n_ratio")):
                variance = predicted_variance(pop, m, estimator, pi, pi_l)
                row[column] = sample_size(m, variance, margin, confidence, estimator).n
            rows.append(row)

    elif args.kind == "preference":
        groups = distinct_value_groups(pop, m)
        rows = [
            {"pi": pi, "prob_ratio_better": preference_probability(groups, m, pi).prob_ratio_better}
            for pi in grid.tolist()
        ]

    else:
        coef_y = partial_y_coefficients(pop)
        coef_r = partial_r_coefficients(pop)
        for pi in grid.tolist():
            for pi_l in grid.tolist():
                rows.append({
                    "pi": pi,
                    "pi_l": pi_l,
                    "expected_var_y": expected_var_y(coef_y, pi, pi_l).value,
                    "expected_var_r": expected_var_r(coef_r, pi, pi_l).value,
                })

    path = write_csv(rows, CURVE_COLUMNS[args.kind], args.out)
    return CommandResult(report=f"{args.kind}: {len(rows)} filas -> {path}", data_files=[path])
