"""
Generadores aleatorios reproducibles
====================================

Todas las simulaciones usan Philox4x64 (generador basado en contador de numpy).
Cada flujo se identifica por (semilla, clave de flujo): el mismo par produce la
misma secuencia en cualquier máquina y con cualquier número de workers.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Tuple, TypeVar

import numpy as np

T = TypeVar("T")

SEED_MASK = (1 << 64) - 1

# Claves de flujo reservadas por módulo
STREAM_SYNTHPOP = 1
STREAM_REALIZE = 2
STREAM_COVERAGE = 3
STREAM_PREFERENCE = 4
STREAM_VERIFY = 5


def make_generator(seed: int, *stream: int) -> np.random.Generator:
    """
    Crea un generador Philox para un flujo determinado

    Args:
        seed: Semilla de 64 bits del usuario
        stream: Componentes de la clave de flujo (módulo, bloque, réplica...)

    Returns:
        np.random.Generator respaldado por Philox
    """
    sequence = np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(sequence))


def block_ranges(total: int, block_size: int) -> Tuple[Tuple[int, int], ...]:
    """Particiona [0, total) en bloques fijos; la partición no depende de los workers"""
    block_size = max(1, int(block_size))
    return tuple((start, min(start + block_size, total)) for start in range(0, total, block_size))


def map_blocks(task: Callable[[int, int, int], T], total: int, block_size: int, workers: int = 1) -> List[T]:
    """
    Ejecuta task(bloque, inicio, fin) sobre bloques fijos de réplicas

    Los resultados se devuelven en orden de bloque, de modo que cualquier
    reducción posterior es idéntica con cualquier número de workers.
    """
    ranges = block_ranges(total, block_size)
    if workers <= 1 or len(ranges) <= 1:
        return [task(index, start, end) for index, (start, end) in enumerate(ranges)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda args: task(args[0], *args[1]), enumerate(ranges)))
