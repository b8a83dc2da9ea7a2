"""
Dependencias compartidas por los subcomandos
============================================

Resolución de la población (archivo o generador), conversión de opciones
monetarias y de probabilidad, workers y escritura de CSV.
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from ..config import settings
from ..modules.population.models import ClaimPopulation
from ..modules.population.services import parse_claims_csv
from ..modules.population.utils import cents_to_dollars, dollars_to_cents
from ..modules.synthpop.services import generate, synth_spec
from ..shared.exceptions import ValidationException

logger = logging.getLogger(__name__)


# ===========================================
# OPCIONES COMUNES
# ===========================================

def add_population_arguments(parser: argparse.ArgumentParser, with_seed: bool = True) -> None:
    """
    --claims ARCHIVO o --synth TIPO (con --seed y --size opcional)

    Los subcomandos que ya usan --seed para su propia simulación pasan
    with_seed=False y la misma semilla alimenta al generador.
    """
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--claims", help="Archivo CSV de reclamos")
    source.add_argument("--synth", help="Población simulada: edwards, neter o clinic")
    parser.add_argument("--size", type=int, default=None, help="N alternativo para --synth")
    if with_seed:
        add_seed_argument(parser, required=False)


def add_seed_argument(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--seed", type=int, required=required, default=None, help="Semilla de 64 bits")


def add_workers_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=None, help="Hilos (por defecto: núcleos disponibles)")


def add_confidence_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--confidence", default=None, help=f"Nivel de confianza (por defecto {settings.DEFAULT_CONFIDENCE})"
    )


# ===========================================
# RESOLUCIÓN
# ===========================================

def resolve_population(args: argparse.Namespace) -> ClaimPopulation:
    """
    Carga la población indicada por --claims o la genera con --synth

    Raises:
        ValidationException: --synth sin --seed, o archivo inexistente
    """
    if args.claims:
        path = Path(args.claims)
        if not path.is_file():
            raise ValidationException("archivo no encontrado", field="claims", value=str(path))
        return parse_claims_csv(path)

    return generate(synth_spec(args.synth, resolve_seed(getattr(args, "seed", None)), args.size))


def resolve_seed(seed: Optional[int]) -> int:
    if seed is None:
        raise ValidationException("es obligatoria para este subcomando", field="seed")
    if not (0 <= seed < 2 ** 64):
        raise ValidationException("debe ser un entero de 64 bits sin signo", field="seed", value=seed)
    return seed


def parse_currency(value: Optional[str], field: str) -> Optional[float]:
    """Dólares decimales de una opción del CLI, redondeados a centavos"""
    if value is None:
        return None
    try:
        cents = dollars_to_cents(value)
    except ValueError as e:
        raise ValidationException(str(e), field=field, value=value)
    if cents <= 0:
        raise ValidationException("debe ser positivo", field=field, value=value)
    return cents_to_dollars(cents)


def parse_probability(value: Optional[str], field: str) -> Optional[float]:
    """Probabilidad decimal en [0, 1]"""
    if value is None:
        return None
    try:
        probability = float(value)
    except ValueError:
        raise ValidationException("no es un número decimal", field=field, value=value)
    if not (0.0 <= probability <= 1.0):
        raise ValidationException("debe estar en [0, 1]", field=field, value=value)
    return probability


def resolve_confidence(value: Optional[str]) -> float:
    confidence = parse_probability(value, "confidence")
    if confidence is None:
        confidence = settings.DEFAULT_CONFIDENCE
    if not (0.5 < confidence < 1.0):
        raise ValidationException("debe estar en (0.5, 1)", field="confidence", value=value)
    return confidence


def resolve_workers(value: Optional[int]) -> int:
    if value is None:
        return max(1, settings.DEFAULT_WORKERS)
    if value < 1:
        raise ValidationException("debe ser al menos 1", field="workers", value=value)
    return value


# ===========================================
# SALIDA CSV
# ===========================================

def write_csv(rows: Sequence[Dict[str, Any]], columns: List[str], path: str) -> str:
    """
    Escribe filas en CSV con encabezado fijo y fin de línea LF

    Returns:
        str: Ruta escrita
    """
    frame = pd.DataFrame(list(rows), columns=columns)
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, lineterminator="\n")
    logger.info(f"💾 [CSV] {len(frame)} filas escritas en {target}")
    return str(target)
