"""Configuration: environment settings, solver parameters and CLI run specs."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import DomainError
from .paths import MLFLOW_DIR
from .types import Acceleration, OutputFormat, Problem, SolutionVariant

if TYPE_CHECKING:
    from ..kinetics.quadrature import HalfRangeQuadrature

PACKAGE_NAME = "knudsen-halfspace"
PACKAGE_VERSION = "0.1.0"

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {extra[run_id]} | {message}"


class EnvironmentSettings(BaseSettings):
    """Project-wide environment settings loaded via pydantic-settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = Field("INFO", alias="KNUDSEN_LOG_LEVEL")
    tracking_db: Path = Field(MLFLOW_DIR / "mlflow.db", alias="KNUDSEN_TRACKING_DB")


class SolverConfig(BaseModel):
    """Discretisation and iteration parameters of the discrete-velocity solver."""

    model_config = ConfigDict(frozen=True)

    L: float = Field(25.0, gt=0, description="Domain truncation length in mean free paths")
    nx: int = Field(2000, ge=64, description="Number of spatial cells")
    n_mu: int = Field(40, ge=2, le=256, description="Quadrature nodes per half-line")
    tol: float = Field(1e-10, gt=0, description="Relative sup-norm change that stops the iteration")
    max_iter: int = Field(50_000, ge=1)
    fit_window: tuple[float, float] = (0.6, 0.9)
    acceleration: Acceleration = Acceleration.NONE
    log_every: int = Field(500, ge=1)

    @field_validator("fit_window")
    @classmethod
    def _check_window(cls, value: tuple[float, float]) -> tuple[float, float]:
        low, high = value
        if not 0.0 <= low < high <= 1.0:
            raise ValueError(f"fit_window must satisfy 0 <= a < b <= 1, got {value}")
        return value

    @property
    def dx(self) -> float:
        return self.L / self.nx

    @property
    def quadrature(self) -> HalfRangeQuadrature:
        from ..kinetics.quadrature import build_half_range

        return build_half_range(self.n_mu)

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.nx + 1)


class RunSpec(BaseModel):
    """One CLI invocation: config-file values overlaid with explicit flags."""

    model_config = ConfigDict(extra="forbid")

    command: str
    gT: float = Field(0.0, allow_inf_nan=False)
    U: float = Field(0.0, allow_inf_nan=False)
    variant: SolutionVariant = SolutionVariant.EXACT
    xmax: float = Field(10.0, gt=0)
    nx: int | None = Field(None, ge=1)
    nmu: int | None = Field(None, ge=2, le=256)
    L: float | None = Field(None, gt=0)
    tol: float | None = Field(None, gt=0)
    max_iter: int | None = Field(None, ge=1)
    out: Path | None = None
    format: OutputFormat = OutputFormat.CSV
    problem: Problem = Problem.COMBINED
    x: list[float] | None = None
    mu_max: float = Field(3.0, gt=0)
    mu_points: int = Field(61, ge=3)
    figure: int | None = Field(None, ge=1, le=3)
    acceleration: Acceleration | None = None
    track: bool = False
    samples: int = Field(51, ge=2)
    gamma_perturbation: float = 0.0

    @model_validator(mode="after")
    def _check_x(self) -> RunSpec:
        if self.x is not None and any(value < 0 for value in self.x):
            raise ValueError(f"x values must be non-negative, got {self.x}")
        return self

    def solver_config(self) -> SolverConfig:
        overrides: dict[str, Any] = {
            "L": self.L,
            "nx": self.nx,
            "n_mu": self.nmu,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "acceleration": self.acceleration,
        }
        try:
            return SolverConfig(**{key: value for key, value in overrides.items() if value is not None})
        except ValidationError as exc:
            raise DomainError(f"Invalid solver configuration: {exc}") from exc


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a flat JSON config document whose keys mirror the CLI flag names."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise DomainError(f"Config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"Invalid JSON in config file {path}: {exc}") from exc

    if not isinstance(data, dict):
        raise DomainError(f"Config file {path} must hold a JSON object, got {type(data).__name__}")
    return {key.lstrip("-").replace("-", "_"): value for key, value in data.items()}


def build_run_spec(command: str, flags: dict[str, Any], config_path: Path | None = None) -> RunSpec:
    """Merge config-file values with flags; flags that were given win."""
    merged: dict[str, Any] = load_config_file(config_path) if config_path else {}
    merged.update({key: value for key, value in flags.items() if value is not None})
    merged["command"] = command
    try:
        return RunSpec.model_validate(merged)
    except ValidationError as exc:
        raise DomainError(f"Invalid run specification: {exc}") from exc


def configure_logging(level: str | None = None) -> None:
    """Install a single stderr sink; data files never receive log output."""
    resolved = (level or EnvironmentSettings().log_level).upper()  # pyright: ignore[reportCallIssue]
    logger.remove()
    logger.configure(extra={"run_id": "-"})
    logger.add(sys.stderr, level=resolved, format=LOG_FORMAT)


__all__ = [
    "EnvironmentSettings",
    "PACKAGE_NAME",
    "PACKAGE_VERSION",
    "RunSpec",
    "SolverConfig",
    "build_run_spec",
    "configure_logging",
    "load_config_file",
]
