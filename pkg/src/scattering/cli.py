"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 domain/math error, 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import figures, io
from .closed_form import a1_closed, a1_resonance_corrected, a2_closed, corrected_frequency
from .identify import IdentificationError, build_design, reconstruct_h1, solve_coeffs
from .model import Coeffs2, DomainError, GridConfig, GridMismatchError, OscillatorParams, grid_with_count, make_grid
from .oracle import IntegrationError, IntegratorConfig, integrate_exact, relative_rms
from .recurrence import a1_recurrence, a2_recurrence
from .response import InputKind, Step, make_input, parse_input, synthesize, synthesize_first

log = logging.getLogger("scattering")

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_CONFIG = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    params: OscillatorParams
    grid: GridConfig
    input: InputKind
    method: str = "closed"
    order: int = 2
    corrected_frequency: bool = False
    out: Path = Path("out")

    def validate(self) -> "RunConfig":
        if self.method not in ("closed", "recurrence", "identified"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.order not in (1, 2):
            raise ConfigError(f"order must be 1 or 2, got {self.order}")
        if self.method == "identified" and self.order == 2:
            raise ConfigError("identified coefficients are first order only; use --order 1")
        if self.corrected_frequency and not isinstance(self.input, Step):
            raise ConfigError("--corrected-frequency applies to step inputs (step:K) only")
        return self


def _common(p: argparse.ArgumentParser, method_choices=("closed", "recurrence")) -> None:
    p.add_argument("--b", type=float, default=0.3, help="damping constant b > 0")
    p.add_argument("--omega0", type=float, default=2.0, help="undamped angular frequency")
    p.add_argument("--epsilon", type=float, default=1.0, help="anharmonicity coefficient")
    p.add_argument("--omega-max", type=float, default=20.0, help="bandwidth; sets the step pi/omega_max")
    p.add_argument("--t-max", type=float, default=20.0, help="time horizon")
    p.add_argument("--input", default="sine:1:0.5", help="step:K or sine:A:w")
    p.add_argument("--method", choices=method_choices, default="closed")
    p.add_argument("--order", type=int, choices=(1, 2), default=None)
    p.add_argument("--corrected-frequency", action="store_true",
                   help="use the amplitude-corrected natural frequency for first-order coefficients")
    p.add_argument("--out", type=Path, default=Path("out"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scattering", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", help="compute scattering coefficients")
    _common(p)

    p = sub.add_parser("simulate", help="synthesize a response and compare with the ODE oracle")
    _common(p, ("closed", "recurrence", "identified"))
    p.add_argument("--measurements", type=Path, help="measurement CSV for --method identified")
    p.add_argument("--coeffs-dir", type=Path, help="load coefficients written by 'coeffs'")
    p.add_argument("--substeps", type=int, default=20)

    p = sub.add_parser("identify", help="fit first-order coefficients to frequency-response data")
    p.add_argument("measurements", type=Path)
    p.add_argument("--omega-max", type=float, default=20.0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t-max", type=float)
    g.add_argument("--n-coeffs", type=int)
    p.add_argument("--input", help="optional input (step:K or sine:A:w) for a predicted response")
    p.add_argument("--out", type=Path, default=Path("out"))

    p = sub.add_parser("reproduce", help="regenerate a reference figure's data and plot")
    p.add_argument("figure", help="1..5 or 'all'")
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--substeps", type=int, default=20)
    p.add_argument("--no-plot", action="store_true")
    return parser


def _run_config(args) -> RunConfig:
    try:
        kind = parse_input(args.input)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    order = args.order if args.order is not None else (1 if args.corrected_frequency and args.command == "coeffs" else 2)
    if args.command == "simulate" and args.method == "identified" and args.order is None:
        order = 1
    return RunConfig(
        OscillatorParams(args.b, args.omega0, args.epsilon),
        make_grid(args.omega_max, args.t_max),
        kind,
        args.method,
        order,
        args.corrected_frequency,
        args.out,
    ).validate()


def _first_order(cfg: RunConfig, corrected: bool):
    if corrected:
        K = cfg.input.amplitude
        if cfg.method == "recurrence":
            cf = corrected_frequency(cfg.params, K)
            return a1_recurrence(OscillatorParams(cfg.params.b, cf.omega0_corrected, cfg.params.epsilon), cfg.grid)
        return a1_resonance_corrected(cfg.params, cfg.grid, K)
    if cfg.method == "recurrence":
        return a1_recurrence(cfg.params, cfg.grid)
    return a1_closed(cfg.params, cfg.grid)


def _second_order(cfg: RunConfig, a1):
    if cfg.method == "recurrence":
        return a2_recurrence(cfg.params, cfg.grid, a1)
    return a2_closed(cfg.params, cfg.grid)


def cmd_coeffs(args) -> int:
    cfg = _run_config(args)
    if cfg.corrected_frequency and cfg.order == 2:
        raise ConfigError("--corrected-frequency yields first-order coefficients only; use --order 1")
    a1 = _first_order(cfg, cfg.corrected_frequency)
    out = cfg.out
    io.write_coeffs1(out / "coeffs1.csv", a1)
    extra = {"kind": "coefficients", "method": cfg.method, "order": cfg.order, "input": str(cfg.input),
             "corrected_frequency": None}
    if cfg.corrected_frequency:
        extra["corrected_frequency"] = asdict(corrected_frequency(cfg.params, cfg.input.amplitude))
    a2 = None
    if cfg.order == 2:
        a2 = _second_order(cfg, a1)
        io.write_coeffs2(out / "coeffs2.csv", a2)
    if cfg.method == "recurrence":
        dev = {"a1": float(np.abs(a1.values - _first_order(
            RunConfig(cfg.params, cfg.grid, cfg.input, "closed"), cfg.corrected_frequency).values).max())}
        if a2 is not None:
            dev["a2"] = float(np.abs(a2.values - a2_closed(cfg.params, cfg.grid).values).max())
        extra["max_deviation_vs_closed"] = dev
        print("max |recurrence - closed|: " + ", ".join(f"{k} {v:.6e}" for k, v in dev.items()))
    io.write_json(out / "coeffs.json", io.provenance(cfg.params, cfg.grid, **extra))
    print(f"wrote {out / 'coeffs1.csv'}" + (f", {out / 'coeffs2.csv'}" if a2 is not None else ""))
    return EXIT_OK


def _load_coeffs(cfg: RunConfig, directory: Path):
    meta = io.read_json(directory / "coeffs.json")
    grid = io.grid_from_sidecar(meta)
    if (grid.omega_max, grid.n_coeffs) != (cfg.grid.omega_max, cfg.grid.n_coeffs):
        raise ConfigError(f"coefficients in {directory} were computed on a different grid")
    if OscillatorParams(**meta["params"]) != cfg.params:
        raise ConfigError(f"coefficients in {directory} were computed for different parameters")
    a1 = io.read_coeffs1(directory / "coeffs1.csv", cfg.grid)
    a2 = None
    if cfg.order == 2:
        if not (directory / "coeffs2.csv").exists():
            raise ConfigError(f"{directory} holds no second-order coefficients")
        a2 = io.read_coeffs2(directory / "coeffs2.csv", cfg.grid)
    return a1, a2


def cmd_simulate(args) -> int:
    cfg = _run_config(args)
    x = make_input(cfg.input, cfg.grid)
    if args.coeffs_dir is not None:
        a1, a2 = _load_coeffs(cfg, args.coeffs_dir)
    elif cfg.method == "identified":
        if args.measurements is None:
            raise ConfigError("--method identified needs --measurements")
        samples = io.read_measurements(args.measurements)
        a1, a2 = solve_coeffs(build_design(samples, cfg.grid), samples).coeffs, None
    else:
        a1 = _first_order(cfg, False)
        a2 = _second_order(cfg, a1) if cfg.order == 2 else None
    if a2 is None:
        a2 = Coeffs2.zeros(cfg.grid)
    resp = synthesize(a1, a2, x)
    oracle = integrate_exact(cfg.params, x, IntegratorConfig(args.substeps))
    columns = {
        "t": x.times,
        "y1": resp.first_order.samples,
        "y2": resp.second_order.samples,
        "total": resp.total.samples,
        "oracle": oracle.samples,
    }
    if cfg.corrected_frequency:
        columns["y1_corrected"] = synthesize_first(_first_order(cfg, True), x).samples
    scale = float(np.linalg.norm(oracle.samples))
    summary = {
        "rel_rms_first_order": relative_rms(resp.first_order, oracle) if scale > 0 else None,
        "rel_rms_total": relative_rms(resp.total, oracle) if scale > 0 else None,
    }
    io.write_table(cfg.out / "response.csv", columns)
    io.write_json(cfg.out / "summary.json", io.provenance(
        cfg.params, cfg.grid, kind="simulation", method=cfg.method, order=cfg.order,
        input=str(cfg.input), substeps=args.substeps, metrics=summary))
    for k, v in summary.items():
        print(f"{k}: {'n/a' if v is None else f'{v:.6e}'}")
    return EXIT_OK


def cmd_identify(args) -> int:
    samples = io.read_measurements(args.measurements)
    if args.n_coeffs is not None:
        grid = grid_with_count(args.omega_max, args.n_coeffs)
    else:
        grid = make_grid(args.omega_max, args.t_max if args.t_max is not None else 20.0)
    fit = solve_coeffs(build_design(samples, grid), samples)
    recon = reconstruct_h1(fit.coeffs, samples.omegas)
    errors = []
    if samples.re_h is not None:
        errors.append(np.abs(recon.real - samples.re_h)[np.isfinite(samples.re_h)])
    if samples.im_h is not None:
        errors.append(np.abs(recon.imag - samples.im_h)[np.isfinite(samples.im_h)])
    report = {
        "kind": "identification",
        "measurements": str(args.measurements),
        "rows": fit.rows,
        "n_real": samples.n_real,
        "n_imag": samples.n_imag,
        "a0_determined": fit.a0_determined,
        "condition": fit.condition,
        "residual_norm": fit.residual_norm,
        "max_reconstruction_error": float(np.concatenate(errors).max()),
    }
    out = args.out
    io.write_coeffs1(out / "identified_coeffs.csv", fit.coeffs)
    if args.input:
        try:
            kind = parse_input(args.input)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        x = make_input(kind, grid)
        y = synthesize_first(fit.coeffs, x)
        io.write_table(out / "prediction.csv", {"t": x.times, "x": x.samples, "y": y.samples})
        report["input"] = str(kind)
    io.write_json(out / "identify_report.json", io.provenance(None, grid, **report))
    if not fit.a0_determined:
        print("a0: indeterminate (no real-part data); set to 0")
    print(f"rows {fit.rows}, N {grid.n_coeffs}, condition {fit.condition:.3e}, residual {fit.residual_norm:.3e}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.figure == "all":
        which = sorted(figures.PRESETS)
    else:
        try:
            which = [int(args.figure)]
        except ValueError:
            raise ConfigError(f"figure must be 1..5 or 'all', got {args.figure!r}") from None
        if which[0] not in figures.PRESETS:
            raise ConfigError(f"figure must be 1..5, got {which[0]}")
    for n in which:
        metrics = figures.reproduce(n, args.out, IntegratorConfig(args.substeps), with_plot=not args.no_plot)
        print(f"figure {n}: " + ", ".join(f"{k}={v:.6g}" for k, v in metrics.items()))
    return EXIT_OK


COMMANDS = {"coeffs": cmd_coeffs, "simulate": cmd_simulate, "identify": cmd_identify, "reproduce": cmd_reproduce}


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    warnings.simplefilter("default")
    try:
        return COMMANDS[args.command](args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, GridMismatchError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, IdentificationError, IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
