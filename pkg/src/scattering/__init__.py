"""Scattering-coefficient representation of weakly nonlinear systems.

A causal system truncated at second order maps a sampled input to its
response through fixed coefficient sets a_k and a_kl. This package computes
them for the damped anharmonic oscillator, synthesizes responses, and fits
first-order coefficients to frequency-response data.
"""

__version__ = "0.1.0"

from .closed_form import (  # noqa: E402
    CorrectedFrequency,
    a1_closed,
    a1_resonance_corrected,
    a2_closed,
    corrected_frequency,
    linear_step_response,
)
from .identify import FreqSamples, build_design, predict_response, reconstruct_h1, solve_coeffs  # noqa: E402
from .kernels import h1, h2  # noqa: E402
from .model import (  # noqa: E402
    Coeffs1,
    Coeffs2,
    DomainError,
    GridConfig,
    OscillatorParams,
    Poles,
    Regime,
    Signal,
    classify,
    make_grid,
    poles_of,
)
from .oracle import IntegratorConfig, estimate_frequency, integrate_correction, integrate_exact, integrate_linear  # noqa: E402
from .recurrence import a1_recurrence, a2_recurrence  # noqa: E402
from .response import Sine, Step, make_input, synthesize, synthesize_first, synthesize_second  # noqa: E402

__all__ = [
    "__version__",
    "CorrectedFrequency",
    "a1_closed",
    "a1_resonance_corrected",
    "a2_closed",
    "corrected_frequency",
    "linear_step_response",
    "Coeffs1",
    "Coeffs2",
    "DomainError",
    "GridConfig",
    "OscillatorParams",
    "Poles",
    "Regime",
    "Signal",
    "classify",
    "make_grid",
    "poles_of",
    "FreqSamples",
    "build_design",
    "predict_response",
    "reconstruct_h1",
    "solve_coeffs",
    "h1",
    "h2",
    "IntegratorConfig",
    "estimate_frequency",
    "integrate_correction",
    "integrate_exact",
    "integrate_linear",
    "a1_recurrence",
    "a2_recurrence",
    "Sine",
    "Step",
    "make_input",
    "synthesize",
    "synthesize_first",
    "synthesize_second",
]
