"""
Configuración compartida de las pruebas: ruta del proyecto y fábricas de poblaciones
"""
import os
import sys
from typing import Optional, Sequence, Tuple

import numpy as np
import pytest

# Añadir la raíz del proyecto al path
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from app.modules.population.models import Claim, ClaimPopulation, LineItem

CLAIMS_HEADER = "claim_id,line_index,claimed_amount,probable_error_amount\n"


def make_population(totals: Sequence[float], errors: Optional[Sequence[float]] = None) -> ClaimPopulation:
    """Población de reclamos de una línea; por defecto X̃ = X"""
    errors = totals if errors is None else errors
    claims = [
        Claim(
            claim_id=f"C{i + 1}",
            lines=(LineItem(claimed_amount=int(round(x * 100)), probable_error_amount=int(round(e * 100))),),
        )
        for i, (x, e) in enumerate(zip(totals, errors))
    ]
    return ClaimPopulation(claims=tuple(claims))


def make_multiline(claims: Sequence[Sequence[Tuple[float, float]]]) -> ClaimPopulation:
    """Población con varias líneas por reclamo: [[(X_ij, X̃_ij), ...], ...]"""
    built = [
        Claim(
            claim_id=f"C{i + 1}",
            lines=tuple(
                LineItem(claimed_amount=int(round(x * 100)), probable_error_amount=int(round(e * 100)))
                for x, e in lines
            ),
        )
        for i, lines in enumerate(claims)
    ]
    return ClaimPopulation(claims=tuple(built))


def lognormal_population(seed: int, size: int, sigma: float = 1.0) -> ClaimPopulation:
    """Población de una línea con montos lognormales redondeados a centavos"""
    rng = np.random.default_rng(seed)
    totals = np.maximum(np.round(rng.lognormal(3.0, sigma, size), 2), 0.01)
    return make_population(totals.tolist())


@pytest.fixture
def claims_file(tmp_path):
    """Escribe un CSV de reclamos con el encabezado estándar y devuelve su ruta"""
    def _write(body: str, header: str = CLAIMS_HEADER, name: str = "claims.csv"):
        path = tmp_path / name
        path.write_text(header + body, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def two_claims() -> ClaimPopulation:
    """X = X̃ = {10, 20}"""
    return make_population([10.0, 20.0])
