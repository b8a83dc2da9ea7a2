"""
Modelos del generador de poblaciones simuladas
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, ConfigDict


class SynthKind(str, Enum):
    """Poblaciones simuladas disponibles"""
    EDWARDS = "edwards"
    NETER = "neter"
    CLINIC = "clinic"


DEFAULT_SIZES = {
    SynthKind.EDWARDS: 9000,
    SynthKind.NETER: 4033,
    SynthKind.CLINIC: 1000,
}


class SynthSpec(BaseModel):
    """Especificación de una población simulada"""
    model_config = ConfigDict(frozen=True)

    kind: SynthKind
    seed: int = Field(..., ge=0, lt=2 ** 64, description="Semilla de 64 bits")
    size_override: Optional[int] = Field(None, ge=1, description="N alternativo")

    @property
    def size(self) -> int:
        return self.size_override or DEFAULT_SIZES[self.kind]
