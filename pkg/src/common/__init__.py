"""Shared configuration, errors, paths and enums."""

from .config import (
    PACKAGE_NAME,
    PACKAGE_VERSION,
    EnvironmentSettings,
    RunSpec,
    SolverConfig,
    build_run_spec,
    configure_logging,
    load_config_file,
)
from .errors import (
    ConvergenceError,
    DomainError,
    FitError,
    KnudsenError,
    NonFiniteValueError,
    QuadratureConstructionError,
)
from .paths import MLFLOW_DIR, ROOT_DIR, atomic_write_text
from .types import Acceleration, FrequencyModel, OutputFormat, Problem, Side, SolutionVariant

__all__ = [
    "Acceleration",
    "ConvergenceError",
    "DomainError",
    "EnvironmentSettings",
    "FitError",
    "FrequencyModel",
    "KnudsenError",
    "MLFLOW_DIR",
    "NonFiniteValueError",
    "OutputFormat",
    "PACKAGE_NAME",
    "PACKAGE_VERSION",
    "Problem",
    "QuadratureConstructionError",
    "ROOT_DIR",
    "RunSpec",
    "Side",
    "SolutionVariant",
    "SolverConfig",
    "atomic_write_text",
    "build_run_spec",
    "configure_logging",
    "load_config_file",
]
