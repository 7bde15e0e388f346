"""Closed-form solution of the half-space temperature-jump / weak-evaporation problem.

The distribution is

    h(x, mu) = h_as(x, mu) - (2U - g_T) exp(-gamma0 x) / sqrt(pi)
               * (1 + gamma0 sign(mu)) / (1 + gamma0) * P(mu)

with the Chapman-Enskog part

    h_as(x, mu) = eps_n + (2U - g_T) mu / sqrt(pi) + eps_T (mu^2 - 1/2) + g_T (mu^2 - 3/2)(x - sign(mu)).

Two layer shapes are supported. ``SolutionVariant.EXACT`` uses
``P(mu) = mu - (1 + mu^2)/sqrt(5)``, which satisfies the kinetic equation.
``SolutionVariant.PUBLISHED`` uses ``P(mu) = mu - 2 mu^2/sqrt(5)`` together with its
printed jump coefficients; it meets the wall condition but leaves a residual in the
collision balance, and is kept so the printed numbers can be reproduced.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from ..common.errors import DomainError
from ..common.types import Problem, Side, SolutionVariant
from .quadrature import MacroState, build_half_range, full_moment, macros_from_distribution

SQRT_PI = math.sqrt(math.pi)
SQRT5 = math.sqrt(5.0)
GAMMA0 = math.sqrt(5.0 * math.pi) / 4.0

# Integrands are quadratic in mu times the weight, so a small rule is already exact.
ANALYTIC_NODES = 16

ArrayLike = float | np.ndarray


def gamma0() -> float:
    """Decay rate ``sqrt(5 pi)/4`` of the Knudsen layer."""
    return GAMMA0


class BoundaryDrive(BaseModel):
    """Far-field temperature gradient ``g_T`` and evaporation drive ``U``."""

    model_config = ConfigDict(frozen=True)

    g_T: float = 0.0
    U: float = 0.0

    @field_validator("g_T", "U")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"drive parameters must be finite, got {value}")
        return value

    @property
    def two_u(self) -> float:
        return 2.0 * self.U

    @property
    def layer_drive(self) -> float:
        """``2U - g_T``, the amplitude multiplying the Knudsen layer."""
        return 2.0 * self.U - self.g_T

    @property
    def mass_velocity(self) -> float:
        """``(1/sqrt(pi)) int exp(-mu^2) mu h dmu``; constant in ``x`` and equal to ``U/sqrt(pi)``."""
        return self.U / SQRT_PI

    def __add__(self, other: BoundaryDrive) -> BoundaryDrive:
        return BoundaryDrive(g_T=self.g_T + other.g_T, U=self.U + other.U)

    @classmethod
    def temperature_jump(cls) -> BoundaryDrive:
        return cls(g_T=1.0, U=0.0)

    @classmethod
    def evaporation(cls) -> BoundaryDrive:
        return cls(g_T=0.0, U=0.5)


class JumpCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps_T: float
    eps_n: float


class JumpSensitivities(BaseModel):
    """Partial derivatives of the jumps with respect to ``g_T`` and ``2U``."""

    model_config = ConfigDict(frozen=True)

    eps_T_per_gT: float
    eps_T_per_2U: float
    eps_n_per_gT: float
    eps_n_per_2U: float


class SolutionConstants(BaseModel):
    """Constants of the closed form in the basis ``1, mu, mu^2 - 1, (mu^2 - 3/2)(x - sign mu)``."""

    model_config = ConfigDict(frozen=True)

    A0: float
    A1: float
    A2: float
    A3: float
    B0: float
    B1: float
    B2: float


class LayerCoefficients(BaseModel):
    """Coefficients of ``(2U - g_T) exp(-gamma0 x)`` in ``dn``, ``u`` and ``dT``."""

    model_config = ConfigDict(frozen=True)

    density: float
    velocity: float
    temperature: float


def jump_sensitivities(variant: SolutionVariant = SolutionVariant.EXACT, gamma: float = GAMMA0) -> JumpSensitivities:
    if SolutionVariant(variant) is SolutionVariant.EXACT:
        return JumpSensitivities(
            eps_T_per_gT=1.0 + 1.0 / (4.0 * gamma),
            eps_T_per_2U=-1.0 / (4.0 * gamma),
            eps_n_per_gT=-(1.0 - 3.0 / (8.0 * gamma)),
            eps_n_per_2U=-3.0 / (8.0 * gamma),
        )
    return JumpSensitivities(
        eps_T_per_gT=1.0 + 1.0 / (2.0 * gamma),
        eps_T_per_2U=-1.0 / (2.0 * gamma),
        eps_n_per_gT=-(1.0 - 1.0 / (4.0 * gamma)),
        eps_n_per_2U=-1.0 / (4.0 * gamma),
    )


def jump_coefficients(
    drive: BoundaryDrive, variant: SolutionVariant = SolutionVariant.EXACT, gamma: float = GAMMA0
) -> JumpCoefficients:
    s = jump_sensitivities(variant, gamma)
    return JumpCoefficients(
        eps_T=s.eps_T_per_gT * drive.g_T + s.eps_T_per_2U * drive.two_u,
        eps_n=s.eps_n_per_gT * drive.g_T + s.eps_n_per_2U * drive.two_u,
    )


def layer_shape_coefficients(variant: SolutionVariant) -> tuple[float, float, float]:
    """``(p0, p1, p2)`` of the layer polynomial ``P(mu) = p0 + p1 mu + p2 mu^2``."""
    if SolutionVariant(variant) is SolutionVariant.EXACT:
        return -1.0 / SQRT5, 1.0, -1.0 / SQRT5
    return 0.0, 1.0, -2.0 / SQRT5


def layer_shape(mu: ArrayLike, variant: SolutionVariant = SolutionVariant.EXACT) -> np.ndarray:
    p0, p1, p2 = layer_shape_coefficients(variant)
    mu = np.asarray(mu, dtype=float)
    return p0 + p1 * mu + p2 * mu * mu


def printed_density_layer_coefficient(gamma: float = GAMMA0) -> float:
    """``c_n`` as printed: ``(gamma/sqrt(pi) - sqrt(pi)/(4 gamma)) / (sqrt(pi)(1 + gamma))``."""
    return (gamma / SQRT_PI - SQRT_PI / (4.0 * gamma)) / (SQRT_PI * (1.0 + gamma))


def printed_temperature_layer_coefficient(gamma: float = GAMMA0) -> float:
    """Printed temperature-layer coefficient ``(sqrt(pi)/8 - 1/sqrt(5)) / (sqrt(pi)(1 + gamma))``.

    It does not follow from either layer shape; profiles built with it are advisory.
    """
    return (SQRT_PI / 8.0 - 1.0 / SQRT5) / (SQRT_PI * (1.0 + gamma))


def _signs(mu: np.ndarray, side: Side | None) -> np.ndarray:
    signs = np.sign(mu)
    zero = signs == 0
    if np.any(zero):
        if side is None:
            raise DomainError("mu = 0 is a discontinuity of h; pass side='+' or side='-'")
        signs = np.where(zero, Side(side).sign, signs)
    return signs


def _check_x(x: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError(f"x must be non-negative, got min(x)={float(np.min(x))}")
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    return x


def _scalar(value: np.ndarray) -> np.ndarray | float:
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class AnalyticSolution:
    """All closed-form constants for one drive, plus evaluators.

    ``gamma`` defaults to ``gamma0()``; overriding it is a sensitivity hook only.
    """

    drive: BoundaryDrive
    variant: SolutionVariant = SolutionVariant.EXACT
    gamma: float = field(default=GAMMA0)

    @cached_property
    def jumps(self) -> JumpCoefficients:
        return jump_coefficients(self.drive, self.variant, self.gamma)

    @cached_property
    def constants(self) -> SolutionConstants:
        g, amplitude = self.drive.g_T, self.drive.layer_drive
        return SolutionConstants(
            A0=self.jumps.eps_n + self.jumps.eps_T / 2.0,
            A1=amplitude / SQRT_PI,
            A2=self.jumps.eps_T,
            A3=g,
            B0=g / 2.0,
            B1=-amplitude / (SQRT_PI * (1.0 + 1.0 / self.gamma)),
            B2=-g,
        )

    def _layer_factor(self, x: np.ndarray, signs: np.ndarray) -> np.ndarray:
        return (
            -(self.drive.layer_drive / SQRT_PI)
            * np.exp(-self.gamma * x)
            * (1.0 + self.gamma * signs)
            / (1.0 + self.gamma)
        )

    def layer(self, x: ArrayLike, mu: ArrayLike, side: Side | None = None) -> np.ndarray | float:
        """The exponentially decaying Knudsen-layer part of ``h``."""
        x, mu = _check_x(x), np.asarray(mu, dtype=float)
        return _scalar(self._layer_factor(x, _signs(mu, side)) * layer_shape(mu, self.variant))

    def chapman_enskog(self, x: ArrayLike, mu: ArrayLike, side: Side | None = None) -> np.ndarray | float:
        x, mu = _check_x(x), np.asarray(mu, dtype=float)
        signs = _signs(mu, side)
        g, eps = self.drive.g_T, self.jumps
        mu2 = mu * mu
        value = (
            eps.eps_n
            + self.drive.layer_drive * mu / SQRT_PI
            + eps.eps_T * (mu2 - 0.5)
            + g * (mu2 - 1.5) * (x - signs)
        )
        return _scalar(value)

    def h(self, x: ArrayLike, mu: ArrayLike, side: Side | None = None) -> np.ndarray | float:
        x, mu = _check_x(x), np.asarray(mu, dtype=float)
        signs = _signs(mu, side)
        layer = self._layer_factor(x, signs) * layer_shape(mu, self.variant)
        return _scalar(np.asarray(self.chapman_enskog(x, mu, side)) + layer)

    def dh_dx(self, x: ArrayLike, mu: ArrayLike, side: Side | None = None) -> np.ndarray | float:
        x, mu = _check_x(x), np.asarray(mu, dtype=float)
        signs = _signs(mu, side)
        layer = self._layer_factor(x, signs) * layer_shape(mu, self.variant)
        return _scalar(self.drive.g_T * (mu * mu - 1.5) - self.gamma * layer)

    def h_plus(self, x: ArrayLike, mu: ArrayLike) -> np.ndarray | float:
        mu = np.asarray(mu, dtype=float)
        if np.any(mu < 0):
            raise DomainError("h_plus is defined for mu >= 0 only")
        return self.h(x, mu, Side.PLUS)

    def h_minus(self, x: ArrayLike, mu: ArrayLike) -> np.ndarray | float:
        mu = np.asarray(mu, dtype=float)
        if np.any(mu > 0):
            raise DomainError("h_minus is defined for mu <= 0 only")
        return self.h(x, mu, Side.MINUS)

    def incoming_wall_distribution(self, mu: ArrayLike) -> np.ndarray | float:
        """``h(0, mu)`` for molecules travelling towards the wall."""
        return self.h_minus(0.0, mu)

    def boundary_equations(self) -> tuple[float, float, float]:
        """Coefficients of ``1, mu, mu^2`` in ``h(0, mu > 0)``; all vanish for a consistent solution."""
        p0, p1, p2 = layer_shape_coefficients(self.variant)
        g, eps = self.drive.g_T, self.jumps
        a1 = self.drive.layer_drive / SQRT_PI
        # at x = 0 the mu > 0 layer factor reduces to -A1
        layer = -a1
        return (
            eps.eps_n - eps.eps_T / 2.0 + 1.5 * g + layer * p0,
            a1 + layer * p1,
            eps.eps_T - g + layer * p2,
        )

    def discontinuity(self, x: ArrayLike) -> np.ndarray | float:
        """``h(x, +0) - h(x, -0)``."""
        x = _check_x(x)
        return _scalar(np.asarray(self.h(x, 0.0, Side.PLUS)) - np.asarray(self.h(x, 0.0, Side.MINUS)))

    def macros(self, x: float) -> MacroState:
        quad = build_half_range(ANALYTIC_NODES)
        return macros_from_distribution(lambda mu: self.h(x, mu), quad)


def layer_coefficients(variant: SolutionVariant = SolutionVariant.EXACT, gamma: float = GAMMA0) -> LayerCoefficients:
    """Integrate the unit layer ``-(1/sqrt(pi)) (1 + gamma s)/(1 + gamma) P(mu)`` for its macro content."""
    quad = build_half_range(ANALYTIC_NODES)

    def unit_layer(mu: np.ndarray) -> np.ndarray:
        return -(1.0 + gamma * np.sign(mu)) / ((1.0 + gamma) * SQRT_PI) * layer_shape(mu, variant)

    state = macros_from_distribution(unit_layer, quad)
    return LayerCoefficients(density=state.dn, velocity=state.u, temperature=state.dT)


def h_eval(
    x: ArrayLike,
    mu: ArrayLike,
    drive: BoundaryDrive,
    side: Side | None = None,
    variant: SolutionVariant = SolutionVariant.EXACT,
) -> np.ndarray | float:
    return AnalyticSolution(drive, variant).h(x, mu, side)


def h_plus(
    x: ArrayLike, mu: ArrayLike, drive: BoundaryDrive, variant: SolutionVariant = SolutionVariant.EXACT
) -> np.ndarray | float:
    return AnalyticSolution(drive, variant).h_plus(x, mu)


def h_minus(
    x: ArrayLike, mu: ArrayLike, drive: BoundaryDrive, variant: SolutionVariant = SolutionVariant.EXACT
) -> np.ndarray | float:
    return AnalyticSolution(drive, variant).h_minus(x, mu)


def chapman_enskog(
    x: ArrayLike,
    mu: ArrayLike,
    drive: BoundaryDrive,
    side: Side | None = None,
    variant: SolutionVariant = SolutionVariant.EXACT,
) -> np.ndarray | float:
    return AnalyticSolution(drive, variant).chapman_enskog(x, mu, side)


def problem_split(
    x: ArrayLike, mu: ArrayLike, side: Side | None = None, variant: SolutionVariant = SolutionVariant.EXACT
) -> tuple[np.ndarray | float, np.ndarray | float]:
    """``(h^T / g_T, h^U / 2U)`` so that ``h = g_T hT + 2U hU``."""
    h_t = AnalyticSolution(BoundaryDrive.temperature_jump(), variant).h(x, mu, side)
    h_u = AnalyticSolution(BoundaryDrive.evaporation(), variant).h(x, mu, side)
    return h_t, h_u


def problem_distribution(
    problem: Problem,
    x: ArrayLike,
    mu: ArrayLike,
    side: Side | None = None,
    drive: BoundaryDrive | None = None,
    variant: SolutionVariant = SolutionVariant.EXACT,
) -> np.ndarray | float:
    """``h^T/g_T``, ``h^U/2U`` or the combined ``h`` for ``drive``."""
    problem = Problem(problem)
    if problem is Problem.TEMP_JUMP:
        return AnalyticSolution(BoundaryDrive.temperature_jump(), variant).h(x, mu, side)
    if problem is Problem.EVAPORATION:
        return AnalyticSolution(BoundaryDrive.evaporation(), variant).h(x, mu, side)
    if drive is None:
        raise DomainError("the combined problem needs a drive")
    return AnalyticSolution(drive, variant).h(x, mu, side)


@dataclass(frozen=True)
class MacroProfiles:
    """Macroscopic profiles on an ``x`` grid together with the kinetic coefficients.

    ``dn = -g_T N_T - 2U N_U`` and ``dT = g_T T_T - 2U T_U``; the ``*_as`` columns drop
    the layer, and ``T_*_printed`` use the printed temperature-layer coefficient.
    """

    x: np.ndarray
    dn: np.ndarray
    u: np.ndarray
    dT: np.ndarray
    N_T: np.ndarray
    N_U: np.ndarray
    T_T: np.ndarray
    T_U: np.ndarray
    N_T_as: np.ndarray
    N_U_as: np.ndarray
    T_T_as: np.ndarray
    T_U_as: np.ndarray
    T_T_printed: np.ndarray
    T_U_printed: np.ndarray

    COLUMNS = (
        "x", "dn", "u", "dT", "N_T", "N_U", "T_T", "T_U",
        "N_T_as", "N_U_as", "T_T_as", "T_U_as", "T_T_printed", "T_U_printed",
    )  # fmt: skip

    def state(self, index: int) -> MacroState:
        return MacroState(dn=float(self.dn[index]), u=float(self.u[index]), dT=float(self.dT[index]))

    def rows(self) -> list[tuple[float, ...]]:
        columns = [getattr(self, name) for name in self.COLUMNS]
        return [tuple(float(column[i]) for column in columns) for i in range(self.x.size)]


def macro_profiles(
    x: ArrayLike, drive: BoundaryDrive, variant: SolutionVariant = SolutionVariant.EXACT
) -> MacroProfiles:
    x = np.atleast_1d(_check_x(x))
    solution = AnalyticSolution(drive, variant)
    jumps = solution.jumps
    sens = jump_sensitivities(variant)
    layer = layer_coefficients(variant)
    decay = np.exp(-GAMMA0 * x)
    amplitude = drive.layer_drive

    printed = jump_sensitivities(SolutionVariant.PUBLISHED)
    printed_t = printed_temperature_layer_coefficient()

    return MacroProfiles(
        x=x,
        dn=jumps.eps_n - drive.g_T * x + layer.density * amplitude * decay,
        u=np.full_like(x, drive.mass_velocity),
        dT=jumps.eps_T + drive.g_T * x + layer.temperature * amplitude * decay,
        N_T=-sens.eps_n_per_gT + x + layer.density * decay,
        N_U=-sens.eps_n_per_2U - layer.density * decay,
        T_T=sens.eps_T_per_gT + x - layer.temperature * decay,
        T_U=-sens.eps_T_per_2U - layer.temperature * decay,
        N_T_as=-sens.eps_n_per_gT + x,
        N_U_as=np.full_like(x, -sens.eps_n_per_2U),
        T_T_as=sens.eps_T_per_gT + x,
        T_U_as=np.full_like(x, -sens.eps_T_per_2U),
        T_T_printed=printed.eps_T_per_gT + x - printed_t * decay,
        T_U_printed=-printed.eps_T_per_2U - printed_t * decay,
    )


def partial_solutions() -> tuple[Callable[..., np.ndarray], ...]:
    """The four elementary solutions ``1``, ``mu``, ``mu^2`` and ``(mu^2 - 3/2)(x - sign mu)``."""

    def h0(x, mu, side=None):
        return np.ones(np.broadcast(np.asarray(x), np.asarray(mu)).shape)

    def h1(x, mu, side=None):
        return np.asarray(mu, dtype=float) + 0.0 * np.asarray(x)

    def h2(x, mu, side=None):
        return np.asarray(mu, dtype=float) ** 2 + 0.0 * np.asarray(x)

    def h3(x, mu, side=None):
        mu = np.asarray(mu, dtype=float)
        return (mu * mu - 1.5) * (np.asarray(x) - _signs(mu, side))

    return h0, h1, h2, h3


def general_solution(
    x: ArrayLike,
    mu: ArrayLike,
    constants: SolutionConstants,
    side: Side | None = None,
    gamma: float = GAMMA0,
) -> np.ndarray | float:
    """Bounded-plus-linear family ``A0 + A1 mu + A2 (mu^2 - 1) + A3 (mu^2 - 3/2)(x - s) + B1 e (1/gamma + s) P``."""
    x, mu = _check_x(x), np.asarray(mu, dtype=float)
    signs = _signs(mu, side)
    mu2 = mu * mu
    value = (
        constants.A0
        + constants.A1 * mu
        + constants.A2 * (mu2 - 1.0)
        + constants.A3 * (mu2 - 1.5) * (x - signs)
        + constants.B1 * np.exp(-gamma * x) * (1.0 / gamma + signs) * layer_shape(mu, SolutionVariant.EXACT)
    )
    return _scalar(value)


def mass_velocity_of(h: Callable[[np.ndarray], np.ndarray]) -> float:
    """``(1/sqrt(pi)) int exp(-mu^2) mu h dmu`` with the analytic-size rule."""
    return full_moment(h, build_half_range(ANALYTIC_NODES), 1) / SQRT_PI


__all__ = [
    "ANALYTIC_NODES",
    "GAMMA0",
    "AnalyticSolution",
    "BoundaryDrive",
    "JumpCoefficients",
    "JumpSensitivities",
    "LayerCoefficients",
    "MacroProfiles",
    "SolutionConstants",
    "chapman_enskog",
    "gamma0",
    "general_solution",
    "h_eval",
    "h_minus",
    "h_plus",
    "jump_coefficients",
    "jump_sensitivities",
    "layer_coefficients",
    "layer_shape",
    "layer_shape_coefficients",
    "macro_profiles",
    "mass_velocity_of",
    "partial_solutions",
    "printed_density_layer_coefficient",
    "printed_temperature_layer_coefficient",
    "problem_distribution",
    "problem_split",
]
