"""Half-range Gaussian quadrature for the weight exp(-mu^2) and the moment functionals built on it.

The rule is constructed from the moment sequence ``m_p = Gamma((p+1)/2) / 2`` with the
Chebyshev algorithm carried out in mpmath extended precision. Jacobi-matrix eigenvalues
seed the nodes, which are then Newton-polished in the same precision before the
Christoffel weights are taken.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath
import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator
from scipy.linalg import eigh_tridiagonal

from ..common.errors import DomainError, NonFiniteValueError, QuadratureConstructionError

SQRT_PI = math.sqrt(math.pi)
MIN_NODES = 2
MAX_NODES = 256
DEFAULT_NODES = 40

Evaluator = Callable[[np.ndarray], np.ndarray | float]


@dataclass(frozen=True, slots=True)
class HalfRangeQuadrature:
    """Nodes and weights with ``sum w_k f(mu_k) ~ int_0^inf exp(-mu^2) f(mu) dmu``."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise DomainError("nodes and weights must be 1-D arrays of equal length")
        if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
            raise DomainError("nodes must be positive and strictly increasing")
        if np.any(weights <= 0):
            raise DomainError("weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return int(self.nodes.size)

    @property
    def degree(self) -> int:
        return 2 * self.n - 1

    def integrate(self, values: np.ndarray) -> np.ndarray | float:
        """Apply the rule along the last axis of ``values``."""
        return np.asarray(values, dtype=float) @ self.weights


class MacroState(BaseModel):
    model_config = ConfigDict(frozen=True)

    dn: float
    u: float
    dT: float

    @field_validator("dn", "u", "dT")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"macroscopic quantity must be finite, got {value}")
        return value


class ConservedFluxes(NamedTuple):
    mass: float
    momentum: float
    energy: float


def half_range_moment(p: int) -> float:
    """``int_0^inf exp(-mu^2) mu^p dmu``."""
    return math.gamma((p + 1) / 2) / 2


def _working_precision(n: int) -> int:
    return 30 + 3 * n


def _recurrence_coefficients(n: int) -> tuple[list, list]:
    """Chebyshev algorithm: moments -> three-term recurrence ``(alpha_k, beta_k)``."""
    size = 2 * n
    moments = [mpmath.gamma(mpmath.mpf(p + 1) / 2) / 2 for p in range(size)]
    alpha = [mpmath.mpf(0)] * n
    beta = [mpmath.mpf(0)] * n
    alpha[0] = moments[1] / moments[0]
    beta[0] = moments[0]

    sigma_older = [mpmath.mpf(0)] * size
    sigma_old = list(moments)
    for k in range(1, n):
        sigma = [mpmath.mpf(0)] * size
        for col in range(k, size - k):
            sigma[col] = sigma_old[col + 1] - alpha[k - 1] * sigma_old[col] - beta[k - 1] * sigma_older[col]
        if sigma[k] <= 0:
            raise QuadratureConstructionError(k, f"Hankel determinant ratio {mpmath.nstr(sigma[k], 5)} <= 0")
        alpha[k] = sigma[k + 1] / sigma[k] - sigma_old[k] / sigma_old[k - 1]
        beta[k] = sigma[k] / sigma_old[k - 1]
        sigma_older, sigma_old = sigma_old, sigma
    return alpha, beta


def _orthonormal_sweep(x, alpha: list, root_beta: list, n: int):
    """Return ``p_n(x)``, ``p_n'(x)`` (unnormalised leading term) and ``sum_{k<n} p_k(x)^2``."""
    p_prev = mpmath.mpf(0)
    p = 1 / root_beta[0]
    dp_prev = mpmath.mpf(0)
    dp = mpmath.mpf(0)
    total = p * p
    for k in range(n):
        scale = root_beta[k + 1] if k + 1 < n else mpmath.mpf(1)
        back = root_beta[k] if k > 0 else mpmath.mpf(0)
        p_next = ((x - alpha[k]) * p - back * p_prev) / scale
        dp_next = (p + (x - alpha[k]) * dp - back * dp_prev) / scale
        if k + 1 < n:
            total += p_next * p_next
        p_prev, p, dp_prev, dp = p, p_next, dp, dp_next
    return p, dp, total


@lru_cache(maxsize=None)
def build_half_range(n: int = DEFAULT_NODES) -> HalfRangeQuadrature:
    """Gaussian rule with ``n`` nodes, exact for polynomials of degree ``<= 2n - 1``."""
    if not MIN_NODES <= n <= MAX_NODES:
        raise DomainError(f"Node count must lie in [{MIN_NODES}, {MAX_NODES}], got {n}")

    with mpmath.workdps(_working_precision(n)):
        alpha, beta = _recurrence_coefficients(n)
        root_beta = [mpmath.sqrt(value) for value in beta]

        diagonal = np.array([float(value) for value in alpha])
        off_diagonal = np.array([float(value) for value in root_beta[1:]])
        seeds = eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True)

        threshold = mpmath.mpf(10) ** (-(mpmath.mp.dps - 10))
        nodes: list[float] = []
        weights: list[float] = []
        for degree, seed in enumerate(seeds, start=1):
            x = mpmath.mpf(float(seed))
            for _ in range(60):
                value, slope, _ = _orthonormal_sweep(x, alpha, root_beta, n)
                if slope == 0:
                    raise QuadratureConstructionError(degree, "vanishing derivative during node polish")
                step = value / slope
                x -= step
                if abs(step) <= threshold * max(1, abs(x)):
                    break
            else:
                raise QuadratureConstructionError(degree, "Newton polish did not settle")
            _, _, total = _orthonormal_sweep(x, alpha, root_beta, n)
            nodes.append(float(x))
            weights.append(float(1 / total))

    logger.debug("Built half-range rule with {} nodes (smallest node {:.3e})", n, nodes[0])
    return HalfRangeQuadrature(nodes=np.array(nodes), weights=np.array(weights))


def _evaluate(h: Evaluator, mu: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(h(mu), dtype=float), mu.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = float(mu[np.argmax(bad)])
        raise NonFiniteValueError(f"Distribution is not finite at node mu={node:.6g}", location={"mu": node})
    return values


def full_moment(h: Evaluator, quad: HalfRangeQuadrature, p: int) -> float:
    """``int_R exp(-mu^2) mu^p h(mu) dmu`` split into the two half-lines."""
    mu = quad.nodes
    plus = _evaluate(h, mu)
    minus = _evaluate(h, -mu)
    return float(quad.weights @ (mu**p * plus) + quad.weights @ ((-mu) ** p * minus))


def macros_from_moments(m0, m1, m2):
    """``(dn, u, dT)`` from the full-range moments ``M_0, M_1, M_2``; works on arrays."""
    return m0 / SQRT_PI, m1 / SQRT_PI, (2.0 / SQRT_PI) * (m2 - 0.5 * m0)


def macros_from_distribution(h: Evaluator, quad: HalfRangeQuadrature) -> MacroState:
    dn, u, dT = macros_from_moments(*(full_moment(h, quad, p) for p in range(3)))
    return MacroState(dn=dn, u=u, dT=dT)


def collision_moments(h: Evaluator, quad: HalfRangeQuadrature) -> tuple[float, float, float]:
    """Moments ``int exp(-mu'^2)|mu'| phi_j(mu') h(mu') dmu'`` for ``phi = 1, mu', mu'^2 - 1``."""
    mu = quad.nodes
    plus = _evaluate(h, mu)
    minus = _evaluate(h, -mu)
    return _collision_moments(plus, minus, quad)


def _collision_moments(plus: np.ndarray, minus: np.ndarray, quad: HalfRangeQuadrature):
    mu = quad.nodes
    base = quad.weights * mu
    even = plus + minus
    m0 = even @ base
    m1 = (plus - minus) @ (base * mu)
    m2 = even @ (base * (mu * mu - 1.0))
    return m0, m1, m2


def collision_moment_arrays(
    plus: np.ndarray, minus: np.ndarray, quad: HalfRangeQuadrature
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collision moments of sampled fields; ``plus[i, k] = h(x_i, mu_k)``, ``minus[i, k] = h(x_i, -mu_k)``."""
    return _collision_moments(np.asarray(plus), np.asarray(minus), quad)


def moment_arrays(
    plus: np.ndarray, minus: np.ndarray, quad: HalfRangeQuadrature
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full-range moments ``M_0, M_1, M_2`` of sampled fields, one value per row."""
    mu = quad.nodes
    w = quad.weights
    plus = np.asarray(plus)
    minus = np.asarray(minus)
    return (plus + minus) @ w, (plus - minus) @ (w * mu), (plus + minus) @ (w * mu * mu)


def flux_moments(h: Evaluator, quad: HalfRangeQuadrature) -> ConservedFluxes:
    """Mass, momentum and energy fluxes carried by ``h``."""
    m1 = full_moment(h, quad, 1)
    m2 = full_moment(h, quad, 2)
    m3 = full_moment(h, quad, 3)
    return ConservedFluxes(mass=m1, momentum=m2, energy=m3 - m1)


__all__ = [
    "DEFAULT_NODES",
    "ConservedFluxes",
    "HalfRangeQuadrature",
    "MacroState",
    "build_half_range",
    "collision_moment_arrays",
    "collision_moments",
    "flux_moments",
    "full_moment",
    "half_range_moment",
    "macros_from_distribution",
    "macros_from_moments",
    "moment_arrays",
]
