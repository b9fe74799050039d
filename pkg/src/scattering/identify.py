"""Least-squares recovery of first-order scattering coefficients from frequency-response samples.

With w~ = pi w / omega_max the linear transfer function is a cosine
series in its real part and a sine series in its imaginary part:
Re H(w) = sum a_k cos(k w~), Im H(w) = -sum a_k sin(k w~). Stacking the
measured parts gives a real linear system M a = F.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernels import h1
from .model import Coeffs1, GridConfig, OscillatorParams, Signal
from .response import synthesize_first

log = logging.getLogger(__name__)

MAX_CONDITION = 1e12


class IdentificationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FreqSamples:
    """Frequency-response measurements.

    ``re_h`` and ``im_h`` are aligned with ``omegas``; NaN entries mark a
    part that was not measured at that frequency, so the real and
    imaginary blocks may have different sizes.
    """

    omegas: np.ndarray
    re_h: Optional[np.ndarray] = None
    im_h: Optional[np.ndarray] = None

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        if om.ndim != 1 or not np.all(np.isfinite(om)):
            raise IdentificationError("frequencies must be a finite 1-d array")
        object.__setattr__(self, "omegas", om)
        if self.re_h is None and self.im_h is None:
            raise IdentificationError("need real or imaginary parts (or both)")
        for name in ("re_h", "im_h"):
            part = getattr(self, name)
            if part is not None:
                part = np.asarray(part, dtype=float)
                if part.shape != om.shape:
                    raise IdentificationError(f"{name} has shape {part.shape}, omegas {om.shape}")
                object.__setattr__(self, name, part)

    def _rows(self, part):
        if part is None:
            return np.zeros(0, dtype=bool)
        return np.isfinite(part)

    @property
    def n_real(self) -> int:
        return int(self._rows(self.re_h).sum())

    @property
    def n_imag(self) -> int:
        return int(self._rows(self.im_h).sum())

    def data_vector(self) -> np.ndarray:
        parts = []
        if self.re_h is not None:
            parts.append(self.re_h[self._rows(self.re_h)])
        if self.im_h is not None:
            parts.append(self.im_h[self._rows(self.im_h)])
        return np.concatenate(parts)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    entries: np.ndarray
    n_real: int
    n_imag: int
    grid: GridConfig


@dataclass(frozen=True, eq=False)
class FitResult:
    coeffs: Coeffs1
    a0_determined: bool
    condition: float
    residual_norm: float
    rows: int


def sample_h1(params: OscillatorParams, omegas, parts: str = "both") -> FreqSamples:
    """Noise-free samples of the linear transfer function; ``parts`` is 're', 'im' or 'both'."""
    omegas = np.asarray(omegas, dtype=float)
    h = h1(params, omegas)
    return FreqSamples(
        omegas,
        h.real if parts in ("re", "both") else None,
        h.imag if parts in ("im", "both") else None,
    )


def build_design(samples: FreqSamples, grid: GridConfig) -> DesignMatrix:
    om = samples.omegas
    if np.any(om < 0) or np.any(om > grid.omega_max * (1 + 1e-12)):
        raise IdentificationError(f"frequencies must lie in [0, {grid.omega_max}]")
    k = np.arange(grid.n_coeffs + 1)
    scaled = np.pi * om / grid.omega_max
    blocks = []
    n_re = n_im = 0
    if samples.re_h is not None:
        rows = np.isfinite(samples.re_h)
        blocks.append(np.cos(np.outer(scaled[rows], k)))
        n_re = int(rows.sum())
    if samples.im_h is not None:
        rows = np.isfinite(samples.im_h)
        blocks.append(-np.sin(np.outer(scaled[rows], k)))
        n_im = int(rows.sum())
    if n_re + n_im == 0:
        raise IdentificationError("no measured data rows")
    return DesignMatrix(np.vstack(blocks), n_re, n_im, grid)


def solve_coeffs(design: DesignMatrix, data: FreqSamples) -> FitResult:
    """Minimise ||M a - F|| with an SVD-based solver.

    Without real-part data the a_0 column is identically zero; a_0 is then
    reported as undetermined and set to zero.
    """
    M = design.entries
    F = data.data_vector()
    rows, cols = M.shape
    if F.shape[0] != rows:
        raise IdentificationError(f"design has {rows} rows but data has {F.shape[0]} values")
    a0_determined = design.n_real > 0
    unknowns = cols if a0_determined else cols - 1
    if rows < unknowns:
        raise IdentificationError(
            f"underdetermined: {unknowns} unknown coefficients (N={design.grid.n_coeffs}) but only {rows} data rows"
        )
    active = M if a0_determined else M[:, 1:]
    cond = float(np.linalg.cond(active))
    if not cond < MAX_CONDITION:
        raise IdentificationError(f"design matrix is rank deficient (condition estimate {cond:.3g})")
    sol, *_ = np.linalg.lstsq(active, F, rcond=None)
    a = sol if a0_determined else np.concatenate([[0.0], sol])
    if not a0_determined:
        log.warning("no real-part data: a_0 is undetermined and set to 0")
    resid = float(np.linalg.norm(M @ a - F))
    return FitResult(Coeffs1(a, design.grid), a0_determined, cond, resid, rows)


def normal_equations_solution(design: DesignMatrix, data: FreqSamples) -> np.ndarray:
    """(M^T M)^{-1} M^T F by direct solve; a reference for the production solver."""
    M = design.entries
    F = data.data_vector()
    return np.linalg.solve(M.T @ M, M.T @ F)


def identify(samples: FreqSamples, grid: GridConfig) -> FitResult:
    return solve_coeffs(build_design(samples, grid), samples)


def reconstruct_h1(coeffs: Coeffs1, omega):
    """Partial Fourier sum sum_k a_k exp(-j k w~); valid for |w| <= omega_max."""
    omega = np.asarray(omega, dtype=float)
    wm = coeffs.grid.omega_max
    if np.any(np.abs(omega) > wm * (1 + 1e-12)):
        raise IdentificationError(f"|omega| exceeds the band limit {wm}")
    k = np.arange(coeffs.grid.n_coeffs + 1)
    phase = np.multiply.outer(np.pi * omega / wm, k)
    out = np.exp(-1j * phase) @ coeffs.values
    return out[()] if np.ndim(out) == 0 else out


def predict_response(coeffs: Coeffs1, input: Signal) -> Signal:
    return synthesize_first(coeffs, input)
