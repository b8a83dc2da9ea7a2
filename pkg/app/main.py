"""
Punto de entrada del CLI de diseño muestral
===========================================

Uso: python -m app.main SUBCOMANDO [opciones]

El reporte va a la salida estándar y el log a stderr, de modo que la salida
y los CSV son idénticos entre ejecuciones con la misma semilla.
"""

import io
import logging
import sys
from contextlib import redirect_stdout
from typing import List, Optional, Sequence

from pydantic import ValidationError

from .config import settings
from .core.router import build_cli_router
from .shared.exceptions import AuditDesignException, EXIT_INTERNAL, EXIT_VALIDATION
from .shared.schemas import CommandResult

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    level = logging.DEBUG if settings.DEBUG else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[Sequence[str]] = None) -> CommandResult:
    """
    Ejecuta un subcomando y devuelve su resultado sin terminar el proceso

    Args:
        argv: Argumentos (sin el nombre del programa)

    Returns:
        CommandResult: exit_code 0 éxito, 1 validación, 2 error interno
    """
    parser = build_cli_router().build_parser()
    args_list: List[str] = list(argv if argv is not None else sys.argv[1:])

    try:
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            args = parser.parse_args(args_list)
    except SystemExit as e:
        # --help y --version terminan el parser con código 0
        code = e.code if isinstance(e.code, int) else EXIT_VALIDATION
        return CommandResult(exit_code=code, report=buffer.getvalue().rstrip("\n"))
    except AuditDesignException as e:
        logger.error(f"❌ [CLI] {e.message}")
        return CommandResult(exit_code=e.exit_code, report=e.message)

    try:
        logger.debug(f"🚀 [CLI] {args.command}")
        return args.handler(args)
    except AuditDesignException as e:
        logger.error(f"❌ [CLI] {args.command}: {e.message}")
        return CommandResult(exit_code=e.exit_code, report=e.message)
    except ValidationError as e:
        logger.error(f"❌ [CLI] {args.command}: datos inválidos: {e}")
        return CommandResult(exit_code=EXIT_VALIDATION, report=f"datos inválidos: {e}")
    except Exception as e:
        logger.debug(f"💥 [CLI] {args.command}: error interno", exc_info=True)
        logger.error(f"❌ [CLI] {args.command}: error interno: {e}")
        return CommandResult(exit_code=EXIT_INTERNAL, report=f"error interno: {e}")


def main() -> None:
    configure_logging()
    result = run(sys.argv[1:])
    if result.report:
        print(result.report)
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
