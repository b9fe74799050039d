"""Frequency-domain Volterra kernels of the anharmonic oscillator."""

from __future__ import annotations

import numpy as np

from .model import OscillatorParams


def h1(params: OscillatorParams, omega):
    """Linear transfer function 1 / (omega0^2 - omega^2 + j b omega).

    Accepts scalars or arrays; returns complex of the same shape.
    """
    omega = np.asarray(omega, dtype=float)
    out = 1.0 / (params.omega0**2 - omega * omega + 1j * params.b * omega)
    return out[()] if out.ndim == 0 else out


def h2(params: OscillatorParams, omega1, omega2):
    """Second-order kernel, -epsilon H1(w1) H1(w2) H1(w1 + w2)."""
    omega1 = np.asarray(omega1, dtype=float)
    omega2 = np.asarray(omega2, dtype=float)
    # multiply in sorted-argument order so swapping the arguments is bit-exact
    lo, hi = np.minimum(omega1, omega2), np.maximum(omega1, omega2)
    out = -params.epsilon * (h1(params, lo) * h1(params, hi)) * h1(params, omega1 + omega2)
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out
