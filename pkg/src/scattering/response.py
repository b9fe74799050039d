"""Time-domain synthesis from scattering coefficients.

Output sample j is a weighted sum of delayed input samples:
y1[j] = sum_k a_k x[j-k] and y2[j] = sum_{k,l} a_kl x[j-k] x[j-l], with
samples before t = 0 and coefficients beyond N treated as zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .model import Coeffs1, Coeffs2, GridConfig, Signal, check_same_step


@dataclass(frozen=True)
class ResponseBreakdown:
    first_order: Signal
    second_order: Signal
    total: Signal


def delay_matrix(x: np.ndarray, n_coeffs: int) -> np.ndarray:
    """X[j, k] = x[j - k] for 0 <= k <= n_coeffs, zero where j < k."""
    J = x.shape[0]
    X = np.zeros((J, n_coeffs + 1))
    for k in range(min(n_coeffs + 1, J)):
        X[k:, k] = x[: J - k]
    return X


def synthesize_first(coeffs: Coeffs1, input: Signal) -> Signal:
    check_same_step(coeffs.grid.step, input.step)
    X = delay_matrix(input.samples, coeffs.grid.n_coeffs)
    return Signal(X @ coeffs.values, input.step)


def synthesize_second(coeffs: Coeffs2, input: Signal, use_symmetry: bool = False) -> Signal:
    """Quadratic part of the response; O(J N^2) for J samples.

    With ``use_symmetry`` only the upper triangle is summed and the
    off-diagonal terms are doubled.
    """
    check_same_step(coeffs.grid.step, input.step)
    X = delay_matrix(input.samples, coeffs.grid.n_coeffs)
    A = coeffs.values
    if use_symmetry:
        y = (X * X) @ np.diag(A) + 2 * np.einsum("jk,kl,jl->j", X, np.triu(A, 1), X)
    else:
        y = np.einsum("jk,kl,jl->j", X, A, X)
    return Signal(y, input.step)


def synthesize(c1: Coeffs1, c2: Coeffs2, input: Signal) -> ResponseBreakdown:
    check_same_step(c1.grid.step, c2.grid.step)
    y1 = synthesize_first(c1, input)
    y2 = synthesize_second(c2, input)
    return ResponseBreakdown(y1, y2, Signal(y1.samples + y2.samples, input.step))


# -- inputs ------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    amplitude: float = 1.0

    def __call__(self, t: float) -> float:
        return self.amplitude if t >= 0 else 0.0

    def sample(self, t: np.ndarray) -> np.ndarray:
        return np.where(t >= 0, self.amplitude, 0.0)

    def __str__(self) -> str:
        return f"step:{self.amplitude!r}"


@dataclass(frozen=True)
class Sine:
    amplitude: float = 1.0
    omega: float = 1.0

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega * t) if t >= 0 else 0.0

    def sample(self, t: np.ndarray) -> np.ndarray:
        return np.where(t >= 0, self.amplitude * np.sin(self.omega * t), 0.0)

    def __str__(self) -> str:
        return f"sine:{self.amplitude!r}:{self.omega!r}"


InputKind = Union[Step, Sine]

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def parse_input(text: str) -> InputKind:
    """Parse ``step:K`` or ``sine:A:w``."""
    m = re.fullmatch(rf"step:({_NUM})", text.strip())
    if m:
        return Step(float(m.group(1)))
    m = re.fullmatch(rf"sine:({_NUM}):({_NUM})", text.strip())
    if m:
        return Sine(float(m.group(1)), float(m.group(2)))
    raise ValueError(f"bad input spec {text!r}; expected 'step:K' or 'sine:A:w'")


def make_input(kind: InputKind, grid: GridConfig, n_samples: Optional[int] = None) -> Signal:
    """Sample ``kind`` at t_j = j T, j = 0 .. N (or ``n_samples`` points); theta(0) = 1."""
    n = grid.n_coeffs + 1 if n_samples is None else n_samples
    t = np.arange(n) * grid.step
    return Signal(kind.sample(t), grid.step, kind)
