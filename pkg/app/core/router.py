"""
Registro central de subcomandos
===============================

Cada módulo de rutas declara sus subcomandos en un CommandRouter; el router
principal los incluye y construye el parser de argparse.
"""

import argparse
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from ..config import settings
from ..shared.exceptions import ValidationException
from ..shared.schemas import CommandResult

Handler = Callable[[argparse.Namespace], CommandResult]
Configure = Callable[[argparse.ArgumentParser], None]


class CliArgumentParser(argparse.ArgumentParser):
    """Parser que convierte los errores de uso en ValidationException"""

    def error(self, message: str):
        raise ValidationException(message)


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    handler: Handler
    configure: Optional[Configure] = None


class CommandRouter:
    """Colección de subcomandos con registro por decorador"""

    def __init__(self):
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, help: str, configure: Optional[Configure] = None) -> Callable[[Handler], Handler]:
        def decorator(handler: Handler) -> Handler:
            if name in self.commands:
                raise ValueError(f"subcomando duplicado: {name}")
            self.commands[name] = Command(name=name, help=help, handler=handler, configure=configure)
            return handler
        return decorator

    def include_router(self, other: "CommandRouter") -> None:
        for command in other.commands.values():
            if command.name in self.commands:
                raise ValueError(f"subcomando duplicado: {command.name}")
            self.commands[command.name] = command

    @property
    def names(self) -> List[str]:
        return list(self.commands)

    def build_parser(self) -> CliArgumentParser:
        parser = CliArgumentParser(
            prog="audit-design",
            description=f"{settings.APP_NAME} v{settings.APP_VERSION}",
        )
        subparsers = parser.add_subparsers(dest="command", metavar="SUBCOMANDO")
        subparsers.required = True
        for command in self.commands.values():
            sub = subparsers.add_parser(command.name, help=command.help, description=command.help)
            if command.configure is not None:
                command.configure(sub)
            sub.set_defaults(handler=command.handler)
        return parser


def build_cli_router() -> CommandRouter:
    """Router principal con todos los subcomandos"""
    from ..routes import curves, design, simulation, stratify

    cli_router = CommandRouter()
    # Diseño: momentos, tamaño de muestra, selección de estimador, máximos conservadores
    cli_router.include_router(design.router)
    # Estratificación
    cli_router.include_router(stratify.router)
    # Simulación, cobertura y verificación
    cli_router.include_router(simulation.router)
    # Datos para gráficos
    cli_router.include_router(curves.router)
    return cli_router
