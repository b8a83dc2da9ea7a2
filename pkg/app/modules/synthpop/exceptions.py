"""
Excepciones del generador de poblaciones simuladas
"""

from ...shared.exceptions import ValidationException


class UnknownPopulationKindException(ValidationException):
    """Tipo de población simulada desconocido"""

    def __init__(self, kind: str):
        super().__init__(
            "tipo de población desconocido (use edwards, neter o clinic)", field="kind", value=kind
        )
