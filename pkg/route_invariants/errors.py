"""Exception hierarchy shared by the library modules, the pipeline and the CLI."""
from __future__ import annotations

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4


class RouteInvariantsError(Exception):
    """Base class for every error raised by :mod:`route_invariants`."""

    kind = "error"


class BraidError(RouteInvariantsError, ValueError):
    """Raised when a braid word or braid operation receives invalid input."""

    kind = "input"


class ConfigError(RouteInvariantsError, ValueError):
    """Raised when a pipeline configuration fails validation."""

    kind = "config"


class NumericalError(RouteInvariantsError, RuntimeError):
    """Raised when a numerical stage (Newton, continuation, bisection) fails."""

    kind = "numerical"


class OrbitError(NumericalError):
    """Newton iteration for a periodic orbit did not converge."""


class NonMinimalPeriodError(OrbitError):
    """Newton converged, but to an orbit whose minimal period is a proper divisor."""

    def __init__(self, message: str, divisor: int) -> None:
        super().__init__(message)
        self.divisor = divisor


class ContinuationError(NumericalError):
    """An orbit branch could not be followed along a parameter segment."""


class DoublingNotFoundError(NumericalError):
    """No multiplier crossing through -1 was found in the bracket."""


class ExtractionError(NumericalError):
    """Orbit points could not be separated by any tried projection."""


class ResourceLimitError(RouteInvariantsError, RuntimeError):
    """A configured enumeration or iteration cap was exceeded."""

    kind = "resource"

    def __init__(self, message: str, cap: int) -> None:
        super().__init__(f"{message} (cap {cap})")
        self.cap = cap


class ConsistencyError(RouteInvariantsError, AssertionError):
    """An arithmetic identity that must always hold was violated."""

    kind = "consistency"


class CacheError(RouteInvariantsError, RuntimeError):
    kind = "cache"


class CacheCorruptError(CacheError):
    """A persisted cache or record failed its integrity checks."""


class CacheVersionError(CacheError):
    """A persisted cache or record was written by an incompatible format version."""


class ReportMismatchError(RouteInvariantsError, ValueError):
    """Two reports cannot be compared (different depth or menus)."""

    kind = "config"


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ResourceLimitError):
        return EXIT_RESOURCE
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, (ConfigError, BraidError, ReportMismatchError, CacheError)):
        return EXIT_CONFIG
    return 1


__all__ = [
    "BraidError",
    "CacheCorruptError",
    "CacheError",
    "CacheVersionError",
    "ConfigError",
    "ConsistencyError",
    "ContinuationError",
    "DoublingNotFoundError",
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_RESOURCE",
    "ExtractionError",
    "NonMinimalPeriodError",
    "NumericalError",
    "OrbitError",
    "ReportMismatchError",
    "ResourceLimitError",
    "RouteInvariantsError",
    "exit_code_for",
]
