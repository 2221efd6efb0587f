"""Error hierarchy shared by every Aurora-DD module.

Each class carries a ``category`` (printed by the CLI) and the process
``exit_code`` the CLI returns when the error escapes a command.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_INVALID = 4
EXIT_IO = 5
EXIT_EMPTY = 6


class AuroraError(Exception):
    """Base class for all Aurora-DD errors."""

    category = "error"
    exit_code = EXIT_INVALID


class InvalidArgumentError(AuroraError, ValueError):
    category = "invalid-argument"


class GainBoundError(InvalidArgumentError):
    """Controller gain outside the stable region |eta| <= 0.02 rad."""

    category = "gain-bound"


class ScheduleInfeasibleError(AuroraError, ValueError):
    """Idle window too short to hold the requested decoupling pulses."""

    category = "schedule-infeasible"


class ConfigError(AuroraError):
    category = "config"
    exit_code = EXIT_CONFIG

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        self.message = message
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ConfigNotFoundError(ConfigError):
    category = "config-missing"


class ConfigSyntaxError(ConfigError):
    category = "config-syntax"


class ConfigValidationError(ConfigError):
    category = "config-invalid"


class CellExecutionError(AuroraError):
    """Failure inside one campaign cell, tagged with its coordinates."""

    category = "cell"

    def __init__(self, coordinates: dict, cause: BaseException):
        self.coordinates = coordinates
        self.cause = cause
        coords = ", ".join(f"{k}={v}" for k, v in coordinates.items())
        super().__init__(f"cell ({coords}) failed: {cause}")

    def __reduce__(self):
        return type(self), (self.coordinates, self.cause)


class ResultsIOError(AuroraError):
    category = "io"
    exit_code = EXIT_IO


class MissingDependencyError(AuroraError):
    """An optional extra (such as ``plots``) is not installed."""

    category = "missing-dependency"
