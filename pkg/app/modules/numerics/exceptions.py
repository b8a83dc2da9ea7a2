"""
Excepciones de los núcleos numéricos
"""

from ...shared.exceptions import ComputationException


class DegeneratePolynomialException(ComputationException):
    """Polinomio idénticamente cero: todo real es raíz"""

    def __init__(self, message: str = "polinomio idénticamente cero"):
        super().__init__(message)
