"""
Schemas compartidos entre módulos
=================================

Tipos Pydantic y enumeraciones usados por varios módulos y por el CLI
"""

from enum import Enum
from typing import List

from pydantic import BaseModel, Field, ConfigDict


class Estimator(str, Enum):
    """Estimador del total de montos en error"""
    SIMPLE_EXPANSION = "simple_expansion"
    RATIO = "ratio"


class CommandResult(BaseModel):
    """Resultado de un subcomando del CLI"""
    model_config = ConfigDict(frozen=True)

    exit_code: int = Field(0, description="0 éxito, 1 error de validación, 2 error interno")
    report: str = Field("", description="Reporte legible para salida estándar")
    data_files: List[str] = Field(default_factory=list, description="Archivos CSV generados")
