"""
Módulo Población - Reclamos, líneas y momentos poblacionales
Incluye lectura/escritura del archivo CSV de reclamos
"""

from .models import (
    LineItem,
    Claim,
    ClaimPopulation,
    PopulationMoments,
    ValueGroup,
    DistinctValueGroups,
    PowerSums,
)
from .services import (
    parse_claims_csv,
    write_claims_csv,
    compute_power_sums,
    compute_moments,
    moments_from_power_sums,
    power_sum_matrix,
    distinct_value_groups,
)
from .exceptions import PopulationValidationException, EmptyPopulationException, ZeroMeanException

__all__ = [
    "LineItem",
    "Claim",
    "ClaimPopulation",
    "PopulationMoments",
    "ValueGroup",
    "DistinctValueGroups",
    "PowerSums",
    "parse_claims_csv",
    "write_claims_csv",
    "compute_power_sums",
    "compute_moments",
    "moments_from_power_sums",
    "power_sum_matrix",
    "distinct_value_groups",
    "PopulationValidationException",
    "EmptyPopulationException",
    "ZeroMeanException",
]
