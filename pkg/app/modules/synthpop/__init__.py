"""
Módulo Poblaciones Simuladas - Generadores edwards, neter y clinic
"""

from .models import SynthKind, SynthSpec, DEFAULT_SIZES
from .services import generate, synth_spec
from .exceptions import UnknownPopulationKindException

__all__ = [
    "SynthKind",
    "SynthSpec",
    "DEFAULT_SIZES",
    "generate",
    "synth_spec",
    "UnknownPopulationKindException",
]
