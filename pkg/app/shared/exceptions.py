"""
Excepciones base del motor de diseño muestral
"""

from typing import Optional, Dict, Any

# Códigos de salida del CLI
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INTERNAL = 2


class AuditDesignException(Exception):
    """Excepción base del sistema"""

    exit_code: int = EXIT_INTERNAL

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ValidationException(AuditDesignException):
    """Datos de entrada o parámetros inválidos"""

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, field: Optional[str] = None, value: Any = None,
                 details: Optional[Dict[str, Any]] = None):
        self.field = field
        self.value = value
        if field:
            message = f"Error en campo '{field}': {message}"
        super().__init__(message, details)


class ComputationException(AuditDesignException):
    """Fallo numérico interno"""
    pass


class OracleCapacityException(ValidationException):
    """La enumeración exhaustiva excede los límites configurados"""
    pass


class AllocationException(ValidationException):
    """La asignación de muestra por estratos no es factible"""
    pass
