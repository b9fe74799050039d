"""Reference solutions by fixed-step classical Runge-Kutta integration.

These serve as the "exact" curves that synthesized responses are judged
against, plus a crossing-based frequency estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import OscillatorParams, Signal


class IntegrationError(ArithmeticError):
    """The integrated state became non-finite."""


@dataclass(frozen=True)
class IntegratorConfig:
    substeps: int = 20
    analytic_input: bool = True

    def __post_init__(self):
        if self.substeps < 1:
            raise ValueError(f"substeps must be >= 1, got {self.substeps}")


def _drive(signal: Signal, cfg: IntegratorConfig) -> Callable[[float], float]:
    if cfg.analytic_input and signal.source is not None:
        return signal.source
    times, values = signal.times, signal.samples
    return lambda t: float(np.interp(t, times, values))


def _rk4(accel, n_samples: int, step: float, substeps: int, dim: int = 2) -> np.ndarray:
    """Integrate a first-order system from a zero state; return the state at every grid step.

    ``accel(t, state)`` returns the state derivative as a tuple.
    """
    h = step / substeps
    state = [0.0] * dim
    out = np.zeros((n_samples, dim))
    for j in range(1, n_samples):
        t0 = (j - 1) * step
        for i in range(substeps):
            t = t0 + i * h
            k1 = accel(t, state)
            k2 = accel(t + h / 2, [s + h / 2 * d for s, d in zip(state, k1)])
            k3 = accel(t + h / 2, [s + h / 2 * d for s, d in zip(state, k2)])
            k4 = accel(t + h, [s + h * d for s, d in zip(state, k3)])
            state = [s + h / 6 * (d1 + 2 * d2 + 2 * d3 + d4) for s, d1, d2, d3, d4 in zip(state, k1, k2, k3, k4)]
        if not all(math.isfinite(s) for s in state):
            raise IntegrationError(f"solution blew up before t = {j * step:.6g}")
        out[j] = state
    return out


def integrate_exact(params: OscillatorParams, input: Signal, cfg: IntegratorConfig = IntegratorConfig()) -> Signal:
    """Solve y'' + b y' + w0^2 y + eps y^2 = x(t) from rest, sampled on the input grid."""
    b, w0sq, eps = params.b, params.omega0**2, params.epsilon
    x = _drive(input, cfg)

    def accel(t, s):
        y, v = s
        return (v, x(t) - b * v - w0sq * y - eps * y * y)

    return Signal(_rk4(accel, len(input), input.step, cfg.substeps)[:, 0], input.step)


def integrate_linear(params: OscillatorParams, input: Signal, cfg: IntegratorConfig = IntegratorConfig()) -> Signal:
    return integrate_exact(params.linear(), input, cfg)


def integrate_correction(params: OscillatorParams, y1: Signal, cfg: IntegratorConfig = IntegratorConfig()) -> Signal:
    """Second-order correction: y2'' + b y2' + w0^2 y2 = -eps y1^2."""
    b, w0sq, eps = params.b, params.omega0**2, params.epsilon
    f = _drive(y1, cfg)

    def accel(t, s):
        y, v = s
        u = f(t)
        return (v, -eps * u * u - b * v - w0sq * y)

    return Signal(_rk4(accel, len(y1), y1.step, cfg.substeps)[:, 0], y1.step)


def integrate_perturbative(
    params: OscillatorParams, input: Signal, cfg: IntegratorConfig = IntegratorConfig()
) -> tuple[Signal, Signal]:
    """First- and second-order perturbative terms integrated jointly as one 4-state system."""
    b, w0sq, eps = params.b, params.omega0**2, params.epsilon
    x = _drive(input, cfg)

    def accel(t, s):
        y1, v1, y2, v2 = s
        return (v1, x(t) - b * v1 - w0sq * y1, v2, -eps * y1 * y1 - b * v2 - w0sq * y2)

    states = _rk4(accel, len(input), input.step, cfg.substeps, dim=4)
    return Signal(states[:, 0], input.step), Signal(states[:, 2], input.step)


def estimate_frequency(signal: Signal, window_start: float) -> float:
    """Angular frequency from mean crossings after ``window_start``.

    Crossings of the window mean are located by linear interpolation;
    the result is pi over the mean spacing between successive crossings.
    """
    t = signal.times
    keep = t >= window_start
    t, y = t[keep], signal.samples[keep]
    y = y - y.mean()
    idx = np.nonzero(np.signbit(y[:-1]) != np.signbit(y[1:]))[0]
    if idx.size < 4:
        raise ValueError(f"insufficient oscillation: {idx.size} mean crossings after t = {window_start}")
    crossings = t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])
    return float(math.pi / np.mean(np.diff(crossings)))


def relative_rms(approx: Signal, reference: Signal) -> float:
    diff = approx.samples - reference.samples
    return float(np.linalg.norm(diff) / np.linalg.norm(reference.samples))
