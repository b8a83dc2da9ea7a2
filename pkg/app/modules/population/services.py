"""
Servicios del módulo de población
=================================

Lectura y escritura del archivo de reclamos, sumas de potencias exactas y
momentos poblacionales.
"""

import logging
import re
from collections import OrderedDict
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from .exceptions import PopulationValidationException, EmptyPopulationException, ZeroMeanException
from .models import (
    LineItem, Claim, ClaimPopulation, PopulationMoments,
    ValueGroup, DistinctValueGroups, PowerSums,
)
from .utils import parse_amount, format_cents, CENTS_PER_DOLLAR
from ...shared.exceptions import ValidationException

logger = logging.getLogger(__name__)

CLAIMS_COLUMNS = ["claim_id", "line_index", "claimed_amount", "probable_error_amount"]
LINE_INDEX_RE = re.compile(r"^\d+$")
PARSER_LINE_RE = re.compile(r"line (\d+)")


# ===========================================
# ARCHIVO DE RECLAMOS
# ===========================================

def _cell(value) -> str:
    return value.strip() if isinstance(value, str) else ""


def parse_claims_csv(path: Union[str, Path]) -> ClaimPopulation:
    """
    Lee un archivo CSV de reclamos

    Args:
        path: Ruta del archivo con encabezado
            claim_id,line_index,claimed_amount,probable_error_amount

    Returns:
        ClaimPopulation: Reclamos en orden de primera aparición, líneas
        ordenadas por line_index

    Raises:
        PopulationValidationException: Fila mal formada (indica el número de línea)
        EmptyPopulationException: Archivo sin filas de datos
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationException("archivo no encontrado", field="claims", value=str(path))

    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptyPopulationException()
    except pd.errors.ParserError as e:
        match = PARSER_LINE_RE.search(str(e))
        raise PopulationValidationException(
            f"número de campos incorrecto ({e})",
            line_number=int(match.group(1)) if match else None,
        )
    except UnicodeDecodeError:
        raise PopulationValidationException("el archivo no está en UTF-8")

    if [str(c).strip() for c in df.columns] != CLAIMS_COLUMNS:
        raise PopulationValidationException(
            f"encabezado inválido, se esperaba: {','.join(CLAIMS_COLUMNS)}", line_number=1
        )

    grouped: "OrderedDict[str, Dict[int, Tuple[LineItem, int]]]" = OrderedDict()
    for position, row in enumerate(df.itertuples(index=False, name=None)):
        line_number = position + 2
        cells = [_cell(value) for value in row]
        if not any(cells):
            continue
        claim_id, line_index, claimed, probable = cells

        if not claim_id:
            raise PopulationValidationException("claim_id vacío", line_number)
        if not LINE_INDEX_RE.match(line_index) or int(line_index) < 1:
            raise PopulationValidationException(f"line_index inválido: '{line_index}'", line_number)
        try:
            claimed_cents = parse_amount(claimed)
            probable_cents = parse_amount(probable)
        except ValueError as e:
            raise PopulationValidationException(str(e), line_number)
        if probable_cents > claimed_cents:
            raise PopulationValidationException(
                f"probable_error_amount {probable} excede claimed_amount {claimed}", line_number
            )

        lines = grouped.setdefault(claim_id, {})
        index = int(line_index)
        if index in lines:
            raise PopulationValidationException(
                f"(claim_id, line_index) duplicado: ({claim_id}, {index})", line_number
            )
        lines[index] = (LineItem(claimed_amount=claimed_cents, probable_error_amount=probable_cents), line_number)

    if not grouped:
        raise EmptyPopulationException()

    claims: List[Claim] = []
    for claim_id, lines in grouped.items():
        ordered = [lines[index] for index in sorted(lines)]
        try:
            claims.append(Claim(claim_id=claim_id, lines=tuple(item for item, _ in ordered)))
        except ValidationError:
            raise PopulationValidationException(
                f"el total del reclamo {claim_id} debe ser positivo", ordered[0][1]
            )

    population = ClaimPopulation(claims=tuple(claims))
    logger.info(f"📥 [POPULATION] {population.n_pop} reclamos, {population.n_lines} líneas leídas de {path.name}")
    return population


def write_claims_csv(pop: ClaimPopulation, path: Union[str, Path]) -> Path:
    """Escribe la población en el formato del archivo de reclamos (centavos exactos)"""
    rows = [
        {
            "claim_id": claim.claim_id,
            "line_index": index,
            "claimed_amount": format_cents(line.claimed_amount),
            "probable_error_amount": format_cents(line.probable_error_amount),
        }
        for claim in pop.claims
        for index, line in enumerate(claim.lines, start=1)
    ]
    path = Path(path)
    pd.DataFrame(rows, columns=CLAIMS_COLUMNS).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"💾 [POPULATION] {len(rows)} líneas escritas en {path}")
    return path


# ===========================================
# SUMAS DE POTENCIAS Y MOMENTOS
# ===========================================

def power_sum_matrix(pop: ClaimPopulation, order: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Matriz (N, 11) de enteros Python con los términos de PowerSums por reclamo

    Args:
        pop: Población
        order: Permutación opcional de los reclamos (ej: orden por total)
    """
    claims = pop.claims if order is None else [pop.claims[i] for i in order]
    matrix = np.empty((len(claims), len(PowerSums().as_row())), dtype=object)
    for row, claim in enumerate(claims):
        matrix[row, :] = PowerSums.of_claim(claim).as_row()
    return matrix


def compute_power_sums(pop: ClaimPopulation) -> PowerSums:
    """Sumas de potencias exactas de toda la población"""
    total = PowerSums()
    for claim in pop.claims:
        total = total + PowerSums.of_claim(claim)
    return total


def moments_from_power_sums(sums: PowerSums) -> PopulationMoments:
    """
    Momentos exactos (divisor N) a partir de sumas enteras en centavos

    Raises:
        EmptyPopulationException: Si sums.n == 0
    """
    if sums.n <= 0:
        raise EmptyPopulationException()

    n = sums.n
    c1, c2, c3 = CENTS_PER_DOLLAR, CENTS_PER_DOLLAR ** 2, CENTS_PER_DOLLAR ** 3
    mu = Fraction(sums.sx, n * c1)
    mu2 = Fraction(sums.sx2, n * c2)
    variance = mu2 - mu * mu
    central3 = Fraction(sums.sx3, n * c3) - 3 * mu * mu2 + 2 * mu ** 3

    g1 = 0.0
    if variance > 0:
        g1 = float(central3) / float(variance) ** 1.5

    return PopulationMoments(
        n_pop=n,
        mu_x=float(mu),
        sigma2_x=float(variance),
        mu_x2=float(mu2),
        tau_x=float(Fraction(sums.sx, c1)),
        tau_x2=float(Fraction(sums.sx2, c2)),
        g1_skew=g1,
        sum_xt_sq=float(Fraction(sums.sxt2, c2)),
        sum_line_xt_sq=float(Fraction(sums.ss, c2)),
    )


def compute_moments(pop: ClaimPopulation) -> PopulationMoments:
    """
    Calcula los momentos poblacionales

    Args:
        pop: Población de reclamos

    Returns:
        PopulationMoments: μ_x, σ_x², μ_x^(2), τ_x, τ_x^(2), G1 y sumas de X̃
    """
    moments = moments_from_power_sums(compute_power_sums(pop))
    logger.debug(
        f"📊 [MOMENTS] N={moments.n_pop} μ_x={moments.mu_x:.4f} "
        f"σ_x²={moments.sigma2_x:.4f} G1={moments.g1_skew:.4f}"
    )
    return moments


def distinct_value_groups(pop: ClaimPopulation, moments: Optional[PopulationMoments] = None) -> DistinctValueGroups:
    """
    Agrupa los reclamos por total distinto y calcula c_(l)

    Raises:
        ZeroMeanException: Si μ_x = 0
    """
    moments = moments or compute_moments(pop)
    if moments.mu_x == 0:
        raise ZeroMeanException("μ_x = 0: c_(l) no está definido")

    values, counts = np.unique(pop.totals_cents(), return_counts=True)
    shift = moments.mu_x + moments.sigma2_x / (2.0 * moments.mu_x)
    groups = []
    for value_cents, count in zip(values.tolist(), counts.tolist()):
        value = value_cents / CENTS_PER_DOLLAR
        groups.append(ValueGroup(distinct_value=value, count=count, c_value=value * (value - shift)))
    return DistinctValueGroups(groups=groups)
