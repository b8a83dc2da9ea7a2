"""
Modelos de los núcleos numéricos
"""

from typing import List

from pydantic import BaseModel, Field, ConfigDict


class CubicRealRoots(BaseModel):
    """Raíces reales de a3·x³ + a2·x² + a1·x + a0 con sus residuos |p(x)|"""
    model_config = ConfigDict(frozen=True)

    roots: List[float] = Field(default_factory=list, description="Raíces reales en orden creciente")
    residuals: List[float] = Field(default_factory=list, description="|p(raíz)| por raíz")
