"""Built-in parameter presets for the five reference figures, and their regeneration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .closed_form import a1_closed, a1_resonance_corrected, a2_closed, corrected_frequency
from .model import GridConfig, OscillatorParams, make_grid, poles_of
from .oracle import IntegratorConfig, estimate_frequency, integrate_exact, relative_rms
from .recurrence import a1_recurrence, a2_recurrence
from .response import InputKind, Sine, Step, make_input, synthesize, synthesize_first, synthesize_second


@dataclass(frozen=True)
class Preset:
    title: str
    params: OscillatorParams
    input: InputKind
    omega_max: float = 20.0
    t_max: float = 20.0

    @property
    def grid(self) -> GridConfig:
        return make_grid(self.omega_max, self.t_max)


PRESETS = {
    1: Preset("Underdamped oscillator, sine input", OscillatorParams(0.3, 2.0, 1.0), Sine(1.0, 0.5)),
    2: Preset("Overdamped oscillator, step input", OscillatorParams(5.0, 2.0, 1.0), Step(1.0)),
    3: Preset("Underdamped oscillator, step input (resonant)", OscillatorParams(0.3, 2.0, 1.0), Step(1.0)),
    4: Preset("Second-order term, underdamped, sine input", OscillatorParams(0.3, 2.0, 1.0), Sine(1.0, 0.5)),
    5: Preset("Second-order term, overdamped, step input", OscillatorParams(5.0, 2.0, 1.0), Step(1.0)),
}

FREQUENCY_WINDOW = 10.0


def compare_orders(preset: Preset, cfg: IntegratorConfig = IntegratorConfig()):
    grid = preset.grid
    x = make_input(preset.input, grid)
    resp = synthesize(a1_closed(preset.params, grid), a2_closed(preset.params, grid), x)
    exact = integrate_exact(preset.params, x, cfg)
    columns = {
        "t": x.times,
        "exact": exact.samples,
        "y1": resp.first_order.samples,
        "y2": resp.second_order.samples,
        "y1_plus_y2": resp.total.samples,
    }
    metrics = {
        "rel_rms_first_order": relative_rms(resp.first_order, exact),
        "rel_rms_second_order": relative_rms(resp.total, exact),
    }
    return columns, metrics


def compare_frequencies(preset: Preset, cfg: IntegratorConfig = IntegratorConfig()):
    grid = preset.grid
    K = preset.input.amplitude
    x = make_input(preset.input, grid)
    exact = integrate_exact(preset.params, x, cfg)
    plain = synthesize_first(a1_closed(preset.params, grid), x)
    corrected = synthesize_first(a1_resonance_corrected(preset.params, grid, K), x)
    cf = corrected_frequency(preset.params, K)
    columns = {"t": x.times, "exact": exact.samples, "y1": plain.samples, "y1_corrected": corrected.samples}
    metrics = {
        "omega_r": poles_of(preset.params).omega_r,
        "omega_r_corrected": cf.omega_r_corrected,
        "omega0_corrected": cf.omega0_corrected,
        "freq_exact": estimate_frequency(exact, FREQUENCY_WINDOW),
        "freq_y1": estimate_frequency(plain, FREQUENCY_WINDOW),
        "freq_y1_corrected": estimate_frequency(corrected, FREQUENCY_WINDOW),
    }
    return columns, metrics


def compare_second_order(preset: Preset):
    grid = preset.grid
    x = make_input(preset.input, grid)
    closed = a2_closed(preset.params, grid)
    numeric = a2_recurrence(preset.params, grid, a1_recurrence(preset.params, grid))
    y_closed = synthesize_second(closed, x)
    y_numeric = synthesize_second(numeric, x)
    columns = {"t": x.times, "y2_closed": y_closed.samples, "y2_recurrence": y_numeric.samples}
    metrics = {
        "max_coeff_deviation_rel": float(
            np.abs(numeric.values - closed.values).max() / np.abs(closed.values).max()
        ),
        "rel_rms_y2": relative_rms(y_numeric, y_closed),
    }
    return columns, metrics


_STYLES = {
    "exact": dict(color="k", linestyle="-", label="exact"),
    "y1": dict(color="C0", linestyle="-.", label="first order"),
    "y1_plus_y2": dict(color="C1", linestyle="--", label="second order"),
    "y1_corrected": dict(color="C1", linestyle="--", label="first order, corrected frequency"),
    "y2_closed": dict(color="k", linestyle="-", label="closed form"),
    "y2_recurrence": dict(color="C1", linestyle="--", label="recurrence"),
}


def plot(columns, title: str, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, style in _STYLES.items():
        if name in columns:
            ax.plot(columns["t"], columns[name], **style)
    ax.set_xlabel("t")
    ax.set_ylabel("y")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def reproduce(figure: int, out_dir, cfg: IntegratorConfig = IntegratorConfig(), with_plot: bool = True) -> dict:
    if figure not in PRESETS:
        raise ValueError(f"figure must be one of {sorted(PRESETS)}, got {figure}")
    preset = PRESETS[figure]
    if figure in (1, 2):
        columns, metrics = compare_orders(preset, cfg)
    elif figure == 3:
        columns, metrics = compare_frequencies(preset, cfg)
    else:
        columns, metrics = compare_second_order(preset)
    out_dir = Path(out_dir)
    stem = out_dir / f"fig{figure}"
    io.write_table(stem.with_suffix(".csv"), columns)
    io.write_json(
        stem.with_suffix(".json"),
        io.provenance(preset.params, preset.grid, figure=figure, title=preset.title,
                      input=str(preset.input), substeps=cfg.substeps, metrics=metrics),
    )
    if with_plot:
        plot(columns, f"Fig. {figure}: {preset.title}", stem.with_suffix(".png"))
    return metrics
