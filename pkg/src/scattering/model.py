"""Shared domain types: oscillator parameters, the sampling grid and coefficient containers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

CRITICAL_RTOL = 1e-12


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class GridMismatchError(ValueError):
    """Operands live on different time grids."""


class Regime(enum.Enum):
    UNDERDAMPED = "underdamped"
    CRITICAL = "critical"
    OVERDAMPED = "overdamped"


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class OscillatorParams:
    """Damped anharmonic oscillator  y'' + b y' + omega0^2 y + epsilon y^2 = x(t)."""

    b: float
    omega0: float
    epsilon: float = 0.0

    def __post_init__(self):
        for name in ("b", "omega0", "epsilon"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.b <= 0:
            raise DomainError(f"damping b must be positive, got {self.b}")
        if self.omega0 <= 0:
            raise DomainError(f"omega0 must be positive, got {self.omega0}")

    def regime(self) -> Regime:
        return classify(self)

    def linear(self) -> "OscillatorParams":
        return OscillatorParams(self.b, self.omega0, 0.0)


def classify(params: OscillatorParams) -> Regime:
    half_b = params.b / 2
    if abs(params.omega0 - half_b) <= CRITICAL_RTOL * max(params.omega0, half_b):
        return Regime.CRITICAL
    return Regime.UNDERDAMPED if params.omega0 > half_b else Regime.OVERDAMPED


@dataclass(frozen=True)
class GridConfig:
    """Uniform time grid t_j = j * step with step = pi / omega_max.

    ``n_coeffs`` is the largest coefficient index N, so delays run over
    0, step, ..., N * step and N * step >= t_max.
    """

    omega_max: float
    t_max: float
    n_coeffs: int

    @property
    def step(self) -> float:
        return math.pi / self.omega_max

    @property
    def delays(self) -> np.ndarray:
        return np.arange(self.n_coeffs + 1) * self.step

    @property
    def times(self) -> np.ndarray:
        return self.delays

    def delay(self, k: int) -> float:
        return math.pi * k / self.omega_max


def make_grid(omega_max: float, t_max: float) -> GridConfig:
    omega_max = _require_finite("omega_max", omega_max)
    t_max = _require_finite("t_max", t_max)
    if omega_max <= 0 or t_max <= 0:
        raise DomainError(f"omega_max and t_max must be positive, got {omega_max}, {t_max}")
    return GridConfig(omega_max, t_max, math.ceil(t_max * omega_max / math.pi))


def grid_with_count(omega_max: float, n_coeffs: int) -> GridConfig:
    """Grid holding exactly ``n_coeffs + 1`` coefficients; the horizon is N * step."""
    omega_max = _require_finite("omega_max", omega_max)
    if omega_max <= 0 or n_coeffs < 1:
        raise DomainError(f"need omega_max > 0 and n_coeffs >= 1, got {omega_max}, {n_coeffs}")
    return GridConfig(omega_max, n_coeffs * math.pi / omega_max, int(n_coeffs))


@dataclass(frozen=True)
class Poles:
    """Roots of the linear denominator; fields that do not apply to the regime are None."""

    omega_plus: complex
    omega_minus: complex
    omega_r: Optional[float] = None
    lam: Optional[float] = None
    lambda_plus: Optional[float] = None
    lambda_minus: Optional[float] = None


def poles_of(params: OscillatorParams) -> Poles:
    b, w0 = params.b, params.omega0
    half_b = b / 2
    regime = classify(params)
    if regime is Regime.UNDERDAMPED:
        # factored form avoids cancellation when omega0 is close to b/2
        wr = math.sqrt((w0 - half_b) * (w0 + half_b))
        return Poles(complex(wr, half_b), complex(-wr, half_b), omega_r=wr)
    if regime is Regime.OVERDAMPED:
        lam = math.sqrt((half_b - w0) * (half_b + w0))
        lp = half_b + lam
        lm = w0 * w0 / lp
        return Poles(complex(0.0, lp), complex(0.0, lm), lam=lam, lambda_plus=lp, lambda_minus=lm)
    return Poles(complex(0.0, half_b), complex(0.0, half_b))


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Coeffs1:
    """First-order scattering coefficients a_0 .. a_N."""

    values: np.ndarray
    grid: GridConfig

    def __post_init__(self):
        arr = _frozen_array(self.values, 1)
        if arr.shape[0] != self.grid.n_coeffs + 1:
            raise ValueError(f"expected {self.grid.n_coeffs + 1} coefficients, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True, eq=False)
class Coeffs2:
    """Symmetric table of second-order scattering coefficients a_kl, 0 <= k, l <= N."""

    values: np.ndarray
    grid: GridConfig

    def __post_init__(self):
        arr = _frozen_array(self.values, 2)
        n = self.grid.n_coeffs + 1
        if arr.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} table, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, grid: GridConfig) -> "Coeffs2":
        n = grid.n_coeffs + 1
        return cls(np.zeros((n, n)), grid)


@dataclass(frozen=True, eq=False)
class Signal:
    """Causal signal sampled at t_j = j * step; zero for t < 0.

    ``source`` optionally carries the continuous-time function the samples
    were drawn from, so integrators can evaluate it between grid points.
    """

    samples: np.ndarray
    step: float
    source: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, 1))
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step}")

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.step

    def delayed(self, n: int) -> "Signal":
        """Shift right by ``n`` samples, keeping the length."""
        out = np.zeros_like(self.samples)
        if n < len(self):
            out[n:] = self.samples[: len(self) - n]
        return Signal(out, self.step)


def check_same_step(step_a: float, step_b: float) -> None:
    if not math.isclose(step_a, step_b, rel_tol=1e-12, abs_tol=0.0):
        raise GridMismatchError(f"grid mismatch: step {step_a!r} != {step_b!r}")
