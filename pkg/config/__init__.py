"""Configuration package exports."""

from .settings import Config, get_config
from .log import init_logging
from .exceptions import (
    FPU2DError,
    ConfigurationError,
    UsageError,
    GridMismatchError,
    ParityError,
    DomainError,
    AmplitudeTooLargeError,
    ConsistencyError,
    AssumptionViolationError,
    GenericityError,
    DegenerateDirectionError,
    InvertibilityError,
    LinearSolveError,
    NonConvergenceError,
    BallEscapeError,
    IntegratorError,
)

__all__ = [
    "Config",
    "get_config",
    "init_logging",
    "FPU2DError",
    "ConfigurationError",
    "UsageError",
    "GridMismatchError",
    "ParityError",
    "DomainError",
    "AmplitudeTooLargeError",
    "ConsistencyError",
    "AssumptionViolationError",
    "GenericityError",
    "DegenerateDirectionError",
    "InvertibilityError",
    "LinearSolveError",
    "NonConvergenceError",
    "BallEscapeError",
    "IntegratorError",
]
