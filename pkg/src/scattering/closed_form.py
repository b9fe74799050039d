"""Exact scattering coefficients of the anharmonic oscillator from residue calculus.

First-order coefficients are samples of the linear impulse response,
``a_k = T h(kT)``; second-order coefficients are ``T^2 h2(kT, lT)`` where
``h2`` is the two-dimensional inverse transform of the quadratic kernel.
Each damping regime has its own real-valued formula; the complex pole
formulas (``a1_residue``/``a2_residue``) are kept as an independent
evaluation path for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import mpmath
import numpy as np

from .model import (
    Coeffs1,
    Coeffs2,
    DomainError,
    GridConfig,
    OscillatorParams,
    Regime,
    Signal,
    classify,
    poles_of,
)

# relative pole separation |w+ - w-| / omega0 below which the critical formulas are used
CRITICAL_GAP = 1e-6
# below this separation the regime formulas for a_kl lose digits to cancellation
EXTENDED_PRECISION_GAP = 1e-2
EXTENDED_DPS = 40
# |2 lambda_- - lambda_+| / b below which the removable singularity is expanded
DEGENERATE_RTOL = 1e-6


def pole_gap(params: OscillatorParams) -> float:
    p = poles_of(params)
    return abs(p.omega_plus - p.omega_minus) / params.omega0


def effective_regime(params: OscillatorParams) -> Regime:
    """Regime used for coefficient evaluation; near-critical systems use the critical formulas."""
    regime = classify(params)
    if regime is not Regime.CRITICAL and pole_gap(params) < CRITICAL_GAP:
        return Regime.CRITICAL
    return regime


# -- first order -------------------------------------------------------------


def _a1_values(params: OscillatorParams, grid: GridConfig) -> np.ndarray:
    T = grid.step
    kt = grid.delays
    b = params.b
    regime = effective_regime(params)
    if regime is Regime.CRITICAL:
        return T * kt * np.exp(-kt * b / 2)
    p = poles_of(params)
    if regime is Regime.UNDERDAMPED:
        wr = p.omega_r
        return T * np.exp(-kt * b / 2) * np.sin(kt * wr) / wr
    # e^{-kb/2} sinh(k lam) / lam written without overflowing sinh
    return T * (np.exp(-p.lambda_minus * kt) - np.exp(-p.lambda_plus * kt)) / (2 * p.lam)


def a1_closed(params: OscillatorParams, grid: GridConfig) -> Coeffs1:
    """First-order coefficients a_0 .. a_N, dispatched on the damping regime."""
    return Coeffs1(_a1_values(params, grid), grid)


def a1_residue(params: OscillatorParams, grid: GridConfig) -> np.ndarray:
    """Complex pole-form evaluation of a_k (not defined at exact criticality)."""
    p = poles_of(params)
    wp, wm = p.omega_plus, p.omega_minus
    if wp == wm:
        raise DomainError("pole formula is singular for a critically damped oscillator")
    kt = grid.delays
    return grid.step * 1j * (np.exp(1j * kt * wm) - np.exp(1j * kt * wp)) / (wp - wm)


# -- second order ------------------------------------------------------------


def _index_tables(grid: GridConfig):
    kt = grid.delays
    K, L = np.meshgrid(kt, kt, indexing="ij")
    return K, L, np.minimum(K, L), np.maximum(K, L)


def _mirror_upper(table: np.ndarray) -> np.ndarray:
    out = np.triu(table) + np.triu(table, 1).T
    # min(k, l) = 0 makes every formula vanish; pin it against rounding residue
    out[0, :] = 0.0
    out[:, 0] = 0.0
    return out


def _a2_underdamped(params, grid, wr):
    b, w0, T = params.b, params.omega0, grid.step
    K, L, m, n = _index_tables(grid)
    s = K + L
    q = 9 * w0**2 - 2 * b**2
    c1, c2 = 3 * w0**2 - b**2, 2 * b * wr
    outer = np.exp(-s * b / 2)
    inner = np.exp(-n * b / 2)
    # the e^{b m/2} and e^{b(s-n)/2} factors are folded into the outer decay
    braces = (
        outer * (c1 * np.cos(s * wr) + c2 * np.sin(s * wr)) / q
        - inner * (c1 * np.cos((s - 3 * m) * wr) + c2 * np.sin((s - 3 * m) * wr)) / q
        + outer * np.cos((K - L) * wr)
        - inner * np.cos(wr * n)
    )
    return -(T * T) * params.epsilon / (2 * w0**2 * wr**2) * braces


def _removable_factor(d: float, m: np.ndarray, b: float) -> np.ndarray:
    """(1 - e^{d m}) / d, expanded in powers of d when d is negligible."""
    if abs(d) < DEGENERATE_RTOL * b:
        return -m - d * m**2 / 2 - d**2 * m**3 / 6 - d**3 * m**4 / 24
    return -np.expm1(d * m) / d


def _a2_overdamped(params, grid, lam, lp, lm):
    b, T = params.b, grid.step
    K, L, m, n = _index_tables(grid)
    s = K + L
    dp = 2 * lp - lm
    dm = 2 * lm - lp
    # first term: e^{-lp s}(1 - e^{dp m}), exponent combined to stay <= 0
    first = (np.exp(-lp * s) - np.exp(-lp * (n - m) - lm * m)) / (lp * dp)
    if abs(dm) < DEGENERATE_RTOL * b:
        second = np.exp(-lm * s) * _removable_factor(dm, m, b) / lm
    else:
        second = (np.exp(-lm * s) - np.exp(-lm * n - (lp - lm) * m)) / (lm * dm)
    third = (
        np.exp(-lm * K - lp * L) + np.exp(-lp * K - lm * L) - np.exp(-lp * n) - np.exp(-lm * n)
    ) / (lp * lm)
    return -(T * T) * params.epsilon / (4 * lam**2) * (first + second - third)


def _a2_critical(params, grid):
    b, T = params.b, grid.step
    K, L, m, n = _index_tables(grid)
    s = K + L
    bracket = np.exp(-b * s / 2) * (b * b * K * L + 4 * b * s + 24) + np.exp(-b * n / 2) * (
        b * b * K * L - 4 * b * s - b * b * m * m + 12 * b * m - 24
    )
    return -4 * (T * T) * params.epsilon / b**4 * bracket


def _a2_extended(params: OscillatorParams, grid: GridConfig, regime: Regime) -> np.ndarray:
    """Regime formulas in multiprecision, for systems close to critical damping."""
    size = grid.n_coeffs + 1
    out = np.zeros((size, size))
    with mpmath.workdps(EXTENDED_DPS):
        b, w0 = mpmath.mpf(params.b), mpmath.mpf(params.omega0)
        eps, T = mpmath.mpf(params.epsilon), mpmath.pi / mpmath.mpf(grid.omega_max)
        exp, cos, sin = mpmath.exp, mpmath.cos, mpmath.sin
        if regime is Regime.UNDERDAMPED:
            wr = mpmath.sqrt((w0 - b / 2) * (w0 + b / 2))
            q = 9 * w0**2 - 2 * b**2
            c1, c2 = 3 * w0**2 - b**2, 2 * b * wr
            scale = -(T * T) * eps / (2 * w0**2 * wr**2)
        else:
            lam = mpmath.sqrt((b / 2 - w0) * (b / 2 + w0))
            lp, lm = b / 2 + lam, b / 2 - lam
            dm = 2 * lm - lp
            scale = -(T * T) * eps / (4 * lam**2)
        for k in range(size):
            for l in range(k, size):
                kt, lt = k * T, l * T
                m, n, s = kt, lt, kt + lt
                if regime is Regime.UNDERDAMPED:
                    braces = (
                        exp(-s * b / 2) * (c1 * cos(s * wr) + c2 * sin(s * wr)) / q
                        - exp(-n * b / 2) * (c1 * cos((s - 3 * m) * wr) + c2 * sin((s - 3 * m) * wr)) / q
                        + exp(-s * b / 2) * cos((kt - lt) * wr)
                        - exp(-n * b / 2) * cos(wr * n)
                    )
                else:
                    first = exp(-lp * s) * (1 - exp((2 * lp - lm) * m)) / (lp * (2 * lp - lm))
                    if abs(dm) < DEGENERATE_RTOL * b:
                        factor = -m - dm * m**2 / 2 - dm**2 * m**3 / 6 - dm**3 * m**4 / 24
                    else:
                        factor = (1 - exp(dm * m)) / dm
                    second = exp(-lm * s) * factor / lm
                    third = (exp(-lm * kt - lp * lt) + exp(-lp * kt - lm * lt) - exp(-lp * n) - exp(-lm * n)) / (lp * lm)
                    braces = first + second - third
                out[k, l] = float(scale * braces)
    return _mirror_upper(out)


def a2_closed(params: OscillatorParams, grid: GridConfig) -> Coeffs2:
    """Second-order coefficient table a_kl, symmetric, dispatched on the damping regime."""
    if params.epsilon == 0.0:
        return Coeffs2.zeros(grid)
    regime = effective_regime(params)
    if regime is Regime.CRITICAL:
        table = _a2_critical(params, grid)
    elif pole_gap(params) < EXTENDED_PRECISION_GAP:
        return Coeffs2(_a2_extended(params, grid, regime), grid)
    elif regime is Regime.UNDERDAMPED:
        table = _a2_underdamped(params, grid, poles_of(params).omega_r)
    else:
        p = poles_of(params)
        table = _a2_overdamped(params, grid, p.lam, p.lambda_plus, p.lambda_minus)
    return Coeffs2(_mirror_upper(table), grid)


def a2_residue(params: OscillatorParams, grid: GridConfig) -> np.ndarray:
    """Complex pole-form evaluation of a_kl (full table, complex dtype)."""
    p = poles_of(params)
    wp, wm = p.omega_plus, p.omega_minus
    if wp == wm:
        raise DomainError("pole formula is singular for a critically damped oscillator")
    K, L, m, n = _index_tables(grid)
    s = K + L
    e = np.exp
    t1 = (e(1j * wp * s) - e(1j * wp * s - 1j * (2 * wp - wm) * m)) / (wp * (2 * wp - wm))
    t2 = (e(1j * wm * s) - e(1j * wm * s - 1j * (2 * wm - wp) * m)) / (wm * (2 * wm - wp))
    t3 = (e(1j * wm * K + 1j * wp * L) + e(1j * wp * K + 1j * wm * L) - e(1j * wp * n) - e(1j * wm * n)) / (wp * wm)
    T = grid.step
    return -(T * T) * params.epsilon / (wp - wm) ** 2 * (t1 + t2 - t3)


# -- resonance correction ----------------------------------------------------


@dataclass(frozen=True)
class CorrectedFrequency:
    omega0_corrected: float
    omega_r_corrected: Optional[float]
    input_amplitude: float


def corrected_frequency(params: OscillatorParams, k_amplitude: float) -> CorrectedFrequency:
    """Amplitude-dependent natural frequency that removes secular terms for a step of height K."""
    w0sq = params.omega0**2
    disc = w0sq * w0sq + 8 * params.epsilon * k_amplitude
    if not disc >= 0:
        raise DomainError(
            f"omega0^4 + 8 epsilon K = {disc:.6g} < 0: no real corrected frequency"
        )
    big_w0sq = (w0sq + math.sqrt(disc)) / 2
    wr_sq = big_w0sq - params.b**2 / 4
    return CorrectedFrequency(
        math.sqrt(big_w0sq), math.sqrt(wr_sq) if wr_sq > 0 else None, float(k_amplitude)
    )


def a1_resonance_corrected(params: OscillatorParams, grid: GridConfig, k_amplitude: float) -> Coeffs1:
    cf = corrected_frequency(params, k_amplitude)
    return a1_closed(replace(params, omega0=cf.omega0_corrected), grid)


def linear_step_response(params: OscillatorParams, k_amplitude: float, grid: GridConfig) -> Signal:
    """Analytic response of the linear part to K*theta(t), sampled on ``grid``.

    ``params.epsilon`` is ignored. The returned signal carries the
    continuous-time function as its source.
    """
    b, w0, K = params.b, params.omega0, float(k_amplitude)
    regime = effective_regime(params)
    p = poles_of(params)

    if regime is Regime.UNDERDAMPED:
        wr = p.omega_r

        def y(t):
            return K / w0**2 * (1 - np.exp(-b * t / 2) * (np.cos(wr * t) + b / (2 * wr) * np.sin(wr * t)))
    elif regime is Regime.OVERDAMPED:
        lp, lm = p.lambda_plus, p.lambda_minus

        def y(t):
            return K / w0**2 * (1 - (lp * np.exp(-lm * t) - lm * np.exp(-lp * t)) / (lp - lm))
    else:
        def y(t):
            return K / w0**2 * (1 - np.exp(-b * t / 2) * (1 + b * t / 2))

    def source(t):
        return y(t) if t >= 0 else 0.0

    return Signal(y(grid.times), grid.step, source)
