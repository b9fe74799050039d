"""Scattering coefficients from finite-difference recurrences.

The first-order scheme uses forward differences and is explicit; its
characteristic roots are 1 + jT w_+- , which leave the unit circle when
T > b / omega0^2 (underdamped) or T * lambda_+ > 2 (overdamped). The
second-order scheme uses backward differences along the diagonals of the
coefficient table and is unconditionally stable, but it inherits whatever
first-order coefficients it is fed.
"""

from __future__ import annotations

import warnings

import numpy as np

from .model import Coeffs1, Coeffs2, GridConfig, OscillatorParams, check_same_step, poles_of


class RecurrenceStabilityWarning(RuntimeWarning):
    pass


def characteristic_roots(params: OscillatorParams, step: float) -> tuple[complex, complex]:
    p = poles_of(params)
    return 1 + 1j * step * p.omega_plus, 1 + 1j * step * p.omega_minus


def a1_recurrence(params: OscillatorParams, grid: GridConfig) -> Coeffs1:
    T = grid.step
    n = grid.n_coeffs
    roots = characteristic_roots(params, T)
    growth = max(abs(z) for z in roots)
    if growth > 1:
        warnings.warn(
            f"first-order recurrence is unstable at step {T:.4g}: |z| = {growth:.6f} > 1; "
            f"coefficients grow like {growth:.4f}^k instead of decaying",
            RecurrenceStabilityWarning,
            stacklevel=2,
        )
    c1 = 2 - params.b * T
    c0 = 1 + params.omega0**2 * T * T - params.b * T
    a = np.zeros(n + 1)
    if n >= 1:
        a[1] = T * T
    for k in range(n - 1):
        a[k + 2] = c1 * a[k + 1] - c0 * a[k]
    return Coeffs1(a, grid)


def a2_recurrence(params: OscillatorParams, grid: GridConfig, a1: Coeffs1) -> Coeffs2:
    """Second-order table from the diagonal recurrence, driven by ``a1``.

    Entry (k, l) depends on (k-1, l-1), (k-2, l-2) and a_k a_l, so each
    diagonal l - k = d is an independent linear recursion. All diagonals
    are advanced together, one position at a time.
    """
    check_same_step(a1.grid.step, grid.step)
    if a1.grid.n_coeffs != grid.n_coeffs:
        raise ValueError(f"a1 has N={a1.grid.n_coeffs}, grid has N={grid.n_coeffs}")
    T = grid.step
    size = grid.n_coeffs + 1
    gain = 2 + params.b * T
    den = 1 + params.b * T + params.omega0**2 * T * T
    src_scale = params.epsilon * T * T
    a = a1.values

    # diag[d, p] holds entry (p, p + d); positions past the table edge stay zero
    diag = np.zeros((size, size))
    offsets = np.arange(size)
    for p in range(size):
        d = offsets[: size - p]
        src = src_scale * a[p] * a[p + d]
        prev1 = diag[d, p - 1] if p >= 1 else 0.0
        prev2 = diag[d, p - 2] if p >= 2 else 0.0
        diag[d, p] = (gain * prev1 - prev2 - src) / den

    table = np.zeros((size, size))
    rows = np.arange(size)
    for d in range(size):
        p = rows[: size - d]
        table[p, p + d] = diag[d, : size - d]
    table = table + np.triu(table, 1).T
    return Coeffs2(table, grid)
