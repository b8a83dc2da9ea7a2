"""
Utilidades para montos monetarios
=================================

Los montos se almacenan como centavos enteros. El archivo de reclamos exige
exactamente dos decimales; las opciones del CLI aceptan dólares decimales.
"""

import re
from decimal import Decimal, InvalidOperation, ROUND_HALF_UP

AMOUNT_RE = re.compile(r"^(\d+)\.(\d{2})$")
CENTS_PER_DOLLAR = 100


def parse_amount(text: str) -> int:
    """
    Convierte un monto del archivo de reclamos a centavos

    Args:
        text: Monto con exactamente dos decimales (ej: "45.00")

    Returns:
        int: Monto en centavos

    Raises:
        ValueError: Si el formato no es válido o el monto es negativo
    """
    text = (text or "").strip()
    if text.startswith("-"):
        raise ValueError(f"monto negativo: {text}")
    match = AMOUNT_RE.match(text)
    if not match:
        raise ValueError(f"monto mal formado (se esperan dos decimales): '{text}'")
    return int(match.group(1)) * CENTS_PER_DOLLAR + int(match.group(2))


def format_cents(cents: int) -> str:
    """Formatea centavos como texto con dos decimales (ej: 6800 -> "68.00")"""
    sign = "-" if cents < 0 else ""
    cents = abs(int(cents))
    return f"{sign}{cents // CENTS_PER_DOLLAR}.{cents % CENTS_PER_DOLLAR:02d}"


def dollars_to_cents(value: str) -> int:
    """
    Convierte dólares decimales (opciones del CLI) a centavos

    Raises:
        ValueError: Si el texto no es un número decimal
    """
    try:
        amount = Decimal(str(value))
    except InvalidOperation:
        raise ValueError(f"monto no numérico: '{value}'")
    return int((amount * CENTS_PER_DOLLAR).quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def cents_to_dollars(cents: int, power: int = 1) -> float:
    """Convierte una suma en centavos^power a dólares^power"""
    return cents / (CENTS_PER_DOLLAR ** power)
