"""Discrete-velocity source-iteration solver for the half-space problem.

Each characteristic moves with speed ``sign(mu)``, so every node of one sign shares a
single sweep stencil and ``mu`` only enters through the collision source
``S = m0 + mu m1 + (mu^2 - 1) m2``. A cell update integrates ``dh/dx + h = S`` exactly
for a source that is linear across the cell; with a uniform grid the recurrence
``h[i+1] = d h[i] + f[i]`` is a first-order IIR filter and runs through
``scipy.signal.lfilter`` for all nodes at once.

The solver never uses the closed form. At ``x = 0`` the outgoing half is zero
(diffuse wall). At ``x = L`` the incoming half mirrors the deviation from the
drive-carrying elementary solution
``psi = g_T (mu^2 - 3/2)(x - sign mu) + (2U - g_T) mu / sqrt(pi)``:
``h(L, -mu) - psi(L, -mu) = h(L, mu) - psi(L, mu)``. The jumps are left free.
"""

from __future__ import annotations

import math
import uuid
from collections import deque
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from scipy.integrate import trapezoid
from scipy.signal import lfilter
from scipy.stats import linregress

from ..common.config import SolverConfig
from ..common.errors import ConvergenceError, DomainError, FitError, NonFiniteValueError
from ..common.types import Acceleration, SolutionVariant
from .analytic_solution import GAMMA0, AnalyticSolution, BoundaryDrive
from .quadrature import (
    HalfRangeQuadrature,
    build_half_range,
    collision_moment_arrays,
    collision_moments,
    macros_from_moments,
    moment_arrays,
)

SQRT_PI = math.sqrt(math.pi)
MIN_FIT_POINTS = 8
MIN_LAYER_POINTS = 4
LAYER_TAIL_FRACTION = 2e-2
DIFFERENCE_STEP = 1e-5

FieldInitialiser = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class NumericField:
    """Discrete ``h`` on ``x_i`` and ``+-mu_k``: ``plus[i, k] = h(x_i, mu_k)``, ``minus[i, k] = h(x_i, -mu_k)``."""

    x: np.ndarray
    mu: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    drive: BoundaryDrive
    config: SolverConfig
    iterations: int
    converged: bool
    residual_norm: float
    history: list[float] = field(default_factory=list)

    @property
    def quad(self) -> HalfRangeQuadrature:
        return build_half_range(self.mu.size)

    def macros(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(dn, u, dT)`` at every grid point."""
        return macros_from_moments(*moment_arrays(self.plus, self.minus, self.quad))

    def nearest_index(self, x: float) -> int:
        return int(np.argmin(np.abs(self.x - x)))

    def sample(self, x: float) -> tuple[float, np.ndarray, np.ndarray]:
        """Grid point nearest ``x`` with its ``h(x, +mu)`` and ``h(x, -mu)`` rows."""
        i = self.nearest_index(x)
        return float(self.x[i]), self.plus[i].copy(), self.minus[i].copy()

    def sample_indices(self, count: int) -> np.ndarray:
        return np.unique(np.linspace(0, self.x.size - 1, count).round().astype(int))


class ExtractedAsymptotics(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps_T_hat: float
    eps_n_hat: float
    slope_T_hat: float
    slope_n_hat: float
    gamma_hat: float | None
    layer_amplitude: float
    noise_floor: float
    fit_points: int


class ComparisonReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    variant: SolutionVariant
    sup_norm: float
    l2_norm: float
    eps_T_delta: float | None = None
    eps_n_delta: float | None = None
    slope_T_delta: float | None = None
    slope_n_delta: float | None = None
    gamma_delta: float | None = None


@dataclass(frozen=True)
class _CellCoefficients:
    decay: float
    current: float
    following: float

    @classmethod
    def for_step(cls, dx: float) -> _CellCoefficients:
        decay = math.exp(-dx)
        alpha = -math.expm1(-dx)
        following = 1.0 - alpha / dx
        return cls(decay=decay, current=alpha - following, following=following)

    def march(self, start: np.ndarray, source: np.ndarray) -> np.ndarray:
        """Integrate ``dh/ds + h = source`` from ``start`` along axis 0."""
        forcing = self.current * source[:-1] + self.following * source[1:]
        signal = np.vstack([start[np.newaxis, :], forcing])
        return lfilter([1.0], [1.0, -self.decay], signal, axis=0)


def drive_anchor(x: np.ndarray, mu: np.ndarray, drive: BoundaryDrive) -> np.ndarray:
    """Elementary solution carrying the drive; ``mu`` is signed and non-zero."""
    return drive.g_T * (mu * mu - 1.5) * (x - np.sign(mu)) + drive.layer_drive * mu / SQRT_PI


def _sources(plus: np.ndarray, minus: np.ndarray, quad: HalfRangeQuadrature) -> tuple[np.ndarray, np.ndarray]:
    m0, m1, m2 = collision_moment_arrays(plus, minus, quad)
    mu = quad.nodes[np.newaxis, :]
    even = m0[:, np.newaxis] + (mu * mu - 1.0) * m2[:, np.newaxis]
    odd = mu * m1[:, np.newaxis]
    return even + odd, even - odd


def transport_sweep(
    plus: np.ndarray,
    minus: np.ndarray,
    drive: BoundaryDrive,
    config: SolverConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """One source-iteration step: moments, then the forward and backward sweeps."""
    quad = config.quadrature
    cells = _CellCoefficients.for_step(config.dx)
    source_plus, source_minus = _sources(plus, minus, quad)

    new_plus = cells.march(np.zeros(quad.n), source_plus)

    mu = quad.nodes
    far = np.full_like(mu, config.L)
    incoming = drive_anchor(far, -mu, drive) + new_plus[-1] - drive_anchor(far, mu, drive)
    new_minus = cells.march(incoming, source_minus[::-1])[::-1]
    return new_plus, new_minus


def _check_finite(plus: np.ndarray, minus: np.ndarray, x: np.ndarray, mu: np.ndarray, iteration: int) -> None:
    for values, sign in ((plus, 1.0), (minus, -1.0)):
        bad = ~np.isfinite(values)
        if np.any(bad):
            i, k = np.unravel_index(np.argmax(bad), values.shape)
            location = {"x": float(x[i]), "mu": float(sign * mu[k]), "iteration": float(iteration)}
            raise NonFiniteValueError(
                f"Non-finite value at x={x[i]:.6g}, mu={sign * mu[k]:.6g} in iteration {iteration}", location
            )


def _aitken(states: deque[np.ndarray]) -> np.ndarray:
    """Vector Aitken extrapolation from three consecutive iterates."""
    x0, x1, x2 = states
    step_old = x1 - x0
    step_new = x2 - x1
    curvature = step_new - step_old
    denominator = float(np.vdot(curvature, curvature))
    if denominator <= np.finfo(float).tiny:
        return x2
    return x2 - (float(np.vdot(step_new, curvature)) / denominator) * step_new


def solve(
    drive: BoundaryDrive,
    config: SolverConfig | None = None,
    initial: FieldInitialiser | None = None,
) -> NumericField:
    """Run source iteration to a fixed point.

    ``initial(x, mu)`` may seed the iterate (``x`` of shape ``(nx+1, 1)``, signed ``mu`` of
    shape ``(1, n)``); otherwise the drive anchor is used.
    """
    config = config or SolverConfig()
    run_logger = logger.bind(run_id=uuid.uuid4().hex[:8])
    if config.L < 5.0 / GAMMA0:
        run_logger.warning("Domain length L={} is below 5/gamma0={:.3f}; the layer may not decay", config.L, 5.0 / GAMMA0)

    quad = config.quadrature
    x = config.grid()
    mu = quad.nodes
    seed = initial or (lambda xx, mm: drive_anchor(xx, mm, drive))
    xx = x[:, np.newaxis]
    plus = np.broadcast_to(np.asarray(seed(xx, mu[np.newaxis, :]), dtype=float), (x.size, mu.size)).copy()
    minus = np.broadcast_to(np.asarray(seed(xx, -mu[np.newaxis, :]), dtype=float), (x.size, mu.size)).copy()
    _check_finite(plus, minus, x, mu, 0)

    run_logger.info(
        "Solving drive g_T={} U={} on L={} with nx={} n_mu={}", drive.g_T, drive.U, config.L, config.nx, config.n_mu
    )
    history: list[float] = []
    states: deque[np.ndarray] = deque(maxlen=3)
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        new_plus, new_minus = transport_sweep(plus, minus, drive, config)
        _check_finite(new_plus, new_minus, x, mu, iteration)

        scale = max(1.0, float(np.max(np.abs(new_plus))), float(np.max(np.abs(new_minus))))
        change = max(float(np.max(np.abs(new_plus - plus))), float(np.max(np.abs(new_minus - minus)))) / scale
        history.append(change)
        plus, minus = new_plus, new_minus

        if change < config.tol:
            converged = True
            break

        if config.acceleration is Acceleration.AITKEN:
            states.append(np.concatenate([plus, minus], axis=1))
            if len(states) == 3:
                plus, minus = np.split(_aitken(states), 2, axis=1)
                plus[0] = 0.0
                states.clear()

        if iteration % config.log_every == 0:
            run_logger.debug("iteration {}: relative change {:.3e}", iteration, change)

    if not converged:
        run_logger.error("No convergence after {} iterations (last change {:.3e})", iteration, history[-1])
        raise ConvergenceError(iteration, history, config.tol)

    run_logger.info("Converged in {} iterations (relative change {:.3e})", iteration, history[-1])
    return NumericField(
        x=x,
        mu=mu,
        plus=plus,
        minus=minus,
        drive=drive,
        config=config,
        iterations=iteration,
        converged=True,
        residual_norm=history[-1],
        history=history,
    )


def _x_derivative(h: Callable, x: float, mu: np.ndarray) -> np.ndarray:
    step = DIFFERENCE_STEP
    if x >= step:
        return (np.asarray(h(x + step, mu)) - np.asarray(h(x - step, mu))) / (2.0 * step)
    f0, f1, f2 = (np.asarray(h(x + j * step, mu)) for j in range(3))
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step)


def residual(
    h: Callable[[float, np.ndarray], np.ndarray],
    x: float,
    mu: float | np.ndarray,
    quad: HalfRangeQuadrature,
    dh_dx: Callable[[float, np.ndarray], np.ndarray] | None = None,
) -> np.ndarray | float:
    """``sign(mu) dh/dx + h - S`` for an evaluator ``h(x, mu)``.

    Without ``dh_dx`` the derivative is taken by finite differences (accuracy about 1e-8).
    """
    mu_array = np.asarray(mu, dtype=float)
    if np.any(mu_array == 0):
        raise DomainError("residual is undefined at mu = 0")
    m0, m1, m2 = collision_moments(lambda m: h(x, m), quad)
    source = m0 + mu_array * m1 + (mu_array * mu_array - 1.0) * m2
    derivative = np.asarray(dh_dx(x, mu_array)) if dh_dx is not None else _x_derivative(h, x, mu_array)
    value = np.sign(mu_array) * derivative + np.asarray(h(x, mu_array)) - source
    return float(value) if np.ndim(value) == 0 else value


def field_residual(field: NumericField) -> float:
    """Sup norm of the cell-centred difference residual of a discrete field."""
    dx = field.x[1] - field.x[0]
    source_plus, source_minus = _sources(field.plus, field.minus, field.quad)

    def box(values: np.ndarray, source: np.ndarray, direction: float) -> np.ndarray:
        gradient = np.diff(values, axis=0) / dx
        average = 0.5 * (values[1:] + values[:-1])
        source_average = 0.5 * (source[1:] + source[:-1])
        return direction * gradient + average - source_average

    return float(max(np.max(np.abs(box(field.plus, source_plus, 1.0))), np.max(np.abs(box(field.minus, source_minus, -1.0)))))


def extract_asymptotics(field: NumericField, config: SolverConfig | None = None) -> ExtractedAsymptotics:
    """Fit the linear far field and the decay rate of the temperature layer."""
    if not field.converged:
        raise FitError("Asymptotics can only be extracted from a converged field")
    config = config or field.config
    dn, _, dT = field.macros()
    x = field.x
    length = x[-1]

    low, high = config.fit_window
    window = (x >= low * length) & (x <= high * length)
    if int(window.sum()) < MIN_FIT_POINTS:
        raise FitError(f"Fit window {config.fit_window} holds {int(window.sum())} points; need {MIN_FIT_POINTS}")
    if int(window.sum()) < 4 * MIN_FIT_POINTS:
        logger.warning("Fit window {} holds only {} points", config.fit_window, int(window.sum()))

    fit_T = linregress(x[window], dT[window])
    fit_n = linregress(x[window], dn[window])

    deviation = dT - (fit_T.intercept + fit_T.slope * x)
    drive_scale = max(1.0, abs(field.drive.g_T), abs(field.drive.two_u))
    noise_floor = max(10.0 * float(np.max(np.abs(deviation[window]))), 1e-6 * drive_scale)
    amplitude = float(abs(deviation[0]))

    gamma_hat: float | None = None
    if amplitude > noise_floor:
        head = x <= 0.25 * length
        keep = head & (np.abs(deviation) > max(noise_floor, LAYER_TAIL_FRACTION * amplitude))
        if int(keep.sum()) >= MIN_LAYER_POINTS:
            gamma_hat = -float(linregress(x[keep], np.log(np.abs(deviation[keep]))).slope)
    if gamma_hat is None:
        logger.info("Layer amplitude {:.2e} is below the noise floor {:.2e}; decay rate unavailable", amplitude, noise_floor)

    return ExtractedAsymptotics(
        eps_T_hat=float(fit_T.intercept),
        eps_n_hat=float(fit_n.intercept),
        slope_T_hat=float(fit_T.slope),
        slope_n_hat=float(fit_n.slope),
        gamma_hat=gamma_hat,
        layer_amplitude=amplitude,
        noise_floor=noise_floor,
        fit_points=int(window.sum()),
    )


def analytic_on_grid(
    field: NumericField, drive: BoundaryDrive | None = None, variant: SolutionVariant = SolutionVariant.EXACT
) -> tuple[np.ndarray, np.ndarray]:
    solution = AnalyticSolution(drive or field.drive, variant)
    xx = field.x[:, np.newaxis]
    mu = field.mu[np.newaxis, :]
    return np.asarray(solution.h(xx, mu)), np.asarray(solution.h(xx, -mu))


def compare_to_analytic(
    field: NumericField,
    drive: BoundaryDrive | None = None,
    variant: SolutionVariant = SolutionVariant.EXACT,
    mu_exclusion: float = 0.0,
) -> ComparisonReport:
    """Sup and quadrature-weighted L2 differences to the closed form, plus jump deltas."""
    drive = drive or field.drive
    exact_plus, exact_minus = analytic_on_grid(field, drive, variant)
    keep = field.mu >= mu_exclusion
    diff_plus = (field.plus - exact_plus)[:, keep]
    diff_minus = (field.minus - exact_minus)[:, keep]
    weights = field.quad.weights[keep]

    sup_norm = float(max(np.max(np.abs(diff_plus), initial=0.0), np.max(np.abs(diff_minus), initial=0.0)))
    density = (diff_plus**2 + diff_minus**2) @ weights
    l2_norm = float(np.sqrt(trapezoid(density, field.x)))

    report = {"variant": variant, "sup_norm": sup_norm, "l2_norm": l2_norm}
    if field.converged:
        fitted = extract_asymptotics(field)
        solution = AnalyticSolution(drive, variant)
        report["eps_T_delta"] = fitted.eps_T_hat - solution.jumps.eps_T
        report["eps_n_delta"] = fitted.eps_n_hat - solution.jumps.eps_n
        report["slope_T_delta"] = fitted.slope_T_hat - drive.g_T
        report["slope_n_delta"] = fitted.slope_n_hat + drive.g_T
        if fitted.gamma_hat is not None:
            report["gamma_delta"] = fitted.gamma_hat - solution.gamma
    return ComparisonReport(**report)


__all__ = [
    "ComparisonReport",
    "ExtractedAsymptotics",
    "NumericField",
    "SolverConfig",
    "analytic_on_grid",
    "compare_to_analytic",
    "drive_anchor",
    "extract_asymptotics",
    "field_residual",
    "residual",
    "solve",
    "transport_sweep",
]
