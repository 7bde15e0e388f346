"""Affine-frequency collision kernel and its proportional-frequency limit.

Velocities are measured in units of the thermal speed ``v_T`` and lengths in
mean free paths ``l_1 = v_T / nu_1``. The frequency model is
``nu(mu) = nu_0 (1 + sqrt(pi) a |mu|)``; ``a -> inf`` gives ``nu`` proportional
to ``|mu|``, represented by :attr:`FrequencyModel.PROPORTIONAL` instead of a float.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..common.errors import DomainError, NonFiniteValueError
from ..common.types import FrequencyModel

SQRT_PI = math.sqrt(math.pi)

DIMENSIONAL_SYMBOLS: dict[str, str] = {
    "m": "molecular mass",
    "k_B": "Boltzmann constant",
    "T_s": "wall temperature",
    "n_s": "saturated vapour density at the wall",
    "beta_s": "m / (2 k_B T_s)",
    "v_T": "thermal speed 1 / sqrt(beta_s); mu = v / v_T",
    "nu_0": "collision frequency at zero speed",
    "nu_1": "slope of the frequency in the proportional limit",
    "l": "mean free path v_T / nu_0",
    "l_1": "mean free path v_T / nu_1; x = physical x / l_1",
    "tau": "mean free time 1 / nu_0",
    "tau_1": "mean free time 1 / nu_1",
    "f_0": "absolute Maxwellian at the wall",
}

ArrayLike = float | np.ndarray


class UnitsContext(BaseModel):
    """Frequency model selection plus the (documentation-only) dimensional scaffolding."""

    model_config = ConfigDict(frozen=True)

    model: FrequencyModel = FrequencyModel.PROPORTIONAL
    a: float | None = Field(None, description="Frequency slope; only for the affine model")
    symbols: dict[str, str] = Field(default_factory=lambda: dict(DIMENSIONAL_SYMBOLS))

    @model_validator(mode="after")
    def _check_slope(self) -> UnitsContext:
        if self.model is FrequencyModel.AFFINE:
            if self.a is None or not math.isfinite(self.a) or self.a < 0:
                raise ValueError(f"affine model needs a finite a >= 0, got {self.a}")
        elif self.a is not None:
            raise ValueError("the proportional limit carries no finite slope")
        return self

    @classmethod
    def affine(cls, a: float) -> UnitsContext:
        return cls(model=FrequencyModel.AFFINE, a=a)

    @classmethod
    def proportional(cls) -> UnitsContext:
        return cls(model=FrequencyModel.PROPORTIONAL)

    @property
    def slope(self) -> float | FrequencyModel:
        return FrequencyModel.PROPORTIONAL if self.model is FrequencyModel.PROPORTIONAL else float(self.a)


class KernelCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    r0: float
    r1: float
    r2: float
    beta: float


def _check_slope(a: float) -> float:
    if not math.isfinite(a):
        raise DomainError(f"Frequency slope a must be finite, got {a}")
    if a < 0:
        raise DomainError(f"Frequency slope a must be non-negative, got {a}")
    return float(a)


def _as_finite(name: str, values: ArrayLike) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(array)):
        raise NonFiniteValueError(f"{name} contains non-finite values", location={name: float("nan")})
    return array


def kernel_coefficients(a: float) -> KernelCoefficients:
    """Coefficients of ``q(mu, mu', a) = r0 + r1 mu mu' + r2 (mu^2 - beta)(mu'^2 - beta)``."""
    a = _check_slope(a)
    return KernelCoefficients(
        r0=1.0 / (a + 1.0),
        r1=2.0 / (2.0 * a + 1.0),
        r2=4.0 * (a + 1.0) / (4.0 * a * a + 7.0 * a + 2.0),
        beta=(2.0 * a + 1.0) / (2.0 * (a + 1.0)),
    )


def scaled_coefficients(a: float) -> tuple[float, float, float, float]:
    """``(a r0, a r1, a r2, beta)``; each tends to one as ``a`` grows."""
    coefficients = kernel_coefficients(a)
    return a * coefficients.r0, a * coefficients.r1, a * coefficients.r2, coefficients.beta


def kernel_q1(mu: ArrayLike, mu_prime: ArrayLike) -> np.ndarray | float:
    mu = _as_finite("mu", mu)
    mu_prime = _as_finite("mu_prime", mu_prime)
    result = 1.0 + mu * mu_prime + (mu * mu - 1.0) * (mu_prime * mu_prime - 1.0)
    return float(result) if np.ndim(result) == 0 else result


def _resolve_slope(a: float | str | FrequencyModel) -> float | FrequencyModel:
    if isinstance(a, str):
        try:
            model = FrequencyModel(a)
        except ValueError as exc:
            raise DomainError(f"Unknown frequency model {a!r}") from exc
        if model is not FrequencyModel.PROPORTIONAL:
            raise DomainError("The affine model needs a numeric slope a, not a marker")
        return model
    return _check_slope(a)


def kernel_affine(mu: ArrayLike, mu_prime: ArrayLike, a: float | str | FrequencyModel) -> np.ndarray | float:
    """Frequency-weighted kernel ``(1 + sqrt(pi) a |mu'|) q(mu, mu', a)``.

    With the proportional marker (enum or its string value) this is the limit kernel
    ``sqrt(pi) |mu'| q1``.
    """
    mu = _as_finite("mu", mu)
    mu_prime = _as_finite("mu_prime", mu_prime)
    a = _resolve_slope(a)
    if a is FrequencyModel.PROPORTIONAL:
        result = SQRT_PI * np.abs(mu_prime) * kernel_q1(mu, mu_prime)
    else:
        c = kernel_coefficients(a)
        bracket = c.r0 + c.r1 * mu * mu_prime + c.r2 * (mu * mu - c.beta) * (mu_prime * mu_prime - c.beta)
        result = (1.0 + SQRT_PI * a * np.abs(mu_prime)) * bracket
    return float(result) if np.ndim(result) == 0 else result


def kernel_limit_deviation(
    mu: ArrayLike, mu_prime: ArrayLike, a: float | str | FrequencyModel
) -> np.ndarray | float:
    """``|kernel_affine - sqrt(pi)|mu'| q1|``; decays like ``1/a``."""
    mu = _as_finite("mu", mu)
    mu_prime = _as_finite("mu_prime", mu_prime)
    a = _resolve_slope(a)
    if a is FrequencyModel.PROPORTIONAL:
        zeros = np.zeros(np.broadcast(mu, mu_prime).shape)
        return float(zeros) if zeros.ndim == 0 else zeros
    if a <= 0:
        raise DomainError(f"Limit deviation needs a > 0, got {a}")
    limit = SQRT_PI * np.abs(mu_prime) * kernel_q1(mu, mu_prime)
    result = np.abs(kernel_affine(mu, mu_prime, a) - limit)
    return float(result) if np.ndim(result) == 0 else result


def collision_frequency(mu: ArrayLike, context: UnitsContext) -> np.ndarray | float:
    """Dimensionless frequency: ``nu/nu_0`` (affine) or ``nu/nu_1 = |mu|`` (proportional)."""
    mu = _as_finite("mu", mu)
    if context.model is FrequencyModel.PROPORTIONAL:
        result = np.abs(mu)
    else:
        result = 1.0 + SQRT_PI * float(context.a) * np.abs(mu)
    return float(result) if np.ndim(result) == 0 else result


__all__ = [
    "DIMENSIONAL_SYMBOLS",
    "KernelCoefficients",
    "UnitsContext",
    "collision_frequency",
    "kernel_affine",
    "kernel_coefficients",
    "kernel_limit_deviation",
    "kernel_q1",
    "scaled_coefficients",
]
