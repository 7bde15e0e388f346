"""Pydantic payloads emitted by the CLI; JSON output round-trips through these models."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..common.config import PACKAGE_VERSION, SolverConfig
from ..common.types import Problem, Side, SolutionVariant
from ..kinetics.analytic_solution import BoundaryDrive, JumpCoefficients, JumpSensitivities
from ..kinetics.transport_solver import ComparisonReport, ExtractedAsymptotics


class JumpsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: str = PACKAGE_VERSION
    variant: SolutionVariant
    drive: BoundaryDrive
    gamma0: float
    jumps: JumpCoefficients
    sensitivities: JumpSensitivities


class ProfileReport(BaseModel):
    version: str = PACKAGE_VERSION
    variant: SolutionVariant
    drive: BoundaryDrive
    columns: dict[str, list[float]]


class DistributionRow(BaseModel):
    x: float
    mu: float
    side: Side
    h: float


class DistributionReport(BaseModel):
    version: str = PACKAGE_VERSION
    problem: Problem
    variant: SolutionVariant
    drive: BoundaryDrive | None = None
    rows: list[DistributionRow]


class SolveSummary(BaseModel):
    """Outcome of one numerical solve and its cross-check against the closed form."""

    version: str = PACKAGE_VERSION
    drive: BoundaryDrive
    variant: SolutionVariant
    config: SolverConfig
    converged: bool
    iterations: int
    residual_norm: float
    field_residual: float | None = None
    analytic_jumps: JumpCoefficients
    asymptotics: ExtractedAsymptotics | None = None
    comparison: ComparisonReport | None = None
    history_tail: list[float] = Field(default_factory=list)


class VerificationCheck(BaseModel):
    name: str
    passed: bool
    detail: str
    counted: bool = True


class VerificationReport(BaseModel):
    version: str = PACKAGE_VERSION
    gamma_perturbation: float = 0.0
    checks: list[VerificationCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.counted)


__all__ = [
    "DistributionReport",
    "DistributionRow",
    "JumpsReport",
    "ProfileReport",
    "SolveSummary",
    "VerificationCheck",
    "VerificationReport",
]
