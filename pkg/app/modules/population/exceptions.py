"""
Excepciones específicas del módulo de población de reclamos
"""

from typing import Optional

from ...shared.exceptions import ValidationException, ComputationException


class PopulationValidationException(ValidationException):
    """Fila o reclamo inválido en el archivo de entrada"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"Línea {line_number}: {message}"
        super().__init__(message, details={"line_number": line_number})


class EmptyPopulationException(ValidationException):
    """La población no contiene reclamos"""

    def __init__(self, message: str = "población vacía"):
        super().__init__(message)


class ZeroMeanException(ComputationException):
    """μ_x = 0: los coeficientes c_i no están definidos"""
    pass
