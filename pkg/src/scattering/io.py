"""CSV and JSON file formats.

Floats are written with 17 significant digits in scientific notation so a
write/read cycle reproduces every double exactly and identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .identify import FreqSamples
from .model import Coeffs1, Coeffs2, GridConfig, OscillatorParams

MEASUREMENT_COLUMNS = ("omega", "reh", "imh")


class ParseError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def fmt(x: float) -> str:
    return f"{x:.16e}"


def _write_lines(path: Path, header: str, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_coeffs1(path, coeffs: Coeffs1) -> None:
    _write_lines(path, "k,a1", ((str(k), fmt(v)) for k, v in enumerate(coeffs.values)))


def write_coeffs2(path, coeffs: Coeffs2) -> None:
    """Upper triangle k <= l only; the table is symmetric."""
    A = coeffs.values
    n = A.shape[0]
    _write_lines(
        path,
        "k,l,a2",
        ((str(k), str(l), fmt(A[k, l])) for k in range(n) for l in range(k, n)),
    )


def _read_rows(path, expected: Sequence[str]):
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "empty file") from None
        if [h.strip() for h in header] != list(expected):
            raise ParseError(path, 1, f"expected header {','.join(expected)!r}, got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise ParseError(path, lineno, f"expected {len(expected)} fields, got {len(row)}")
            yield lineno, row


def read_coeffs1(path, grid: GridConfig) -> Coeffs1:
    values = np.full(grid.n_coeffs + 1, np.nan)
    for lineno, (k, v) in _read_rows(path, ("k", "a1")):
        try:
            values[int(k)] = float(v)
        except (ValueError, IndexError) as exc:
            raise ParseError(path, lineno, str(exc)) from None
    if np.isnan(values).any():
        raise ParseError(path, 0, f"expected indices 0..{grid.n_coeffs}")
    return Coeffs1(values, grid)


def read_coeffs2(path, grid: GridConfig) -> Coeffs2:
    n = grid.n_coeffs + 1
    table = np.full((n, n), np.nan)
    for lineno, (k, l, v) in _read_rows(path, ("k", "l", "a2")):
        try:
            k, l, v = int(k), int(l), float(v)
            table[k, l] = v
            table[l, k] = v
        except (ValueError, IndexError) as exc:
            raise ParseError(path, lineno, str(exc)) from None
    if np.isnan(table).any():
        raise ParseError(path, 0, f"expected all index pairs 0..{grid.n_coeffs}")
    return Coeffs2(table, grid)


def write_table(path, columns: Mapping[str, np.ndarray]) -> None:
    names = list(columns)
    data = [np.asarray(columns[c], dtype=float) for c in names]
    _write_lines(path, ",".join(names), ([fmt(col[i]) for col in data] for i in range(len(data[0]))))


def read_table(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [list(map(float, r)) for r in reader if r]
    arr = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: arr[:, i] for i, name in enumerate(header)}


def read_measurements(path) -> FreqSamples:
    """Parse a measurement CSV with column ``omega`` and at least one of ``reh``, ``imh``.

    Empty cells mean "not measured". Unknown columns are ignored with a warning.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(path, 1, "empty file") from None
        if "omega" not in header:
            raise ParseError(path, 1, "missing 'omega' column")
        present = [c for c in ("reh", "imh") if c in header]
        if not present:
            raise ParseError(path, 1, "need at least one of the columns 'reh', 'imh'")
        extra = [c for c in header if c not in MEASUREMENT_COLUMNS]
        if extra:
            warnings.warn(f"{path}: ignoring columns {extra}", stacklevel=2)
        idx = {c: header.index(c) for c in ("omega", *present)}
        cols = {c: [] for c in idx}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(path, lineno, f"expected {len(header)} fields, got {len(row)}")
            for c, i in idx.items():
                cell = row[i].strip()
                if c == "omega" and not cell:
                    raise ParseError(path, lineno, "missing omega")
                try:
                    cols[c].append(float(cell) if cell else math.nan)
                except ValueError:
                    raise ParseError(path, lineno, f"not a number in column {c!r}: {cell!r}") from None
    if not cols["omega"]:
        raise ParseError(path, 2, "no data rows")
    return FreqSamples(
        np.array(cols["omega"]),
        np.array(cols["reh"]) if "reh" in cols else None,
        np.array(cols["imh"]) if "imh" in cols else None,
    )


def write_measurements(path, samples: FreqSamples) -> None:
    columns = {"omega": samples.omegas}
    if samples.re_h is not None:
        columns["reh"] = samples.re_h
    if samples.im_h is not None:
        columns["imh"] = samples.im_h
    write_table(path, columns)


def provenance(params: OscillatorParams | None, grid: GridConfig, **extra) -> dict:
    out = {"tool": "scattering", "version": __version__}
    if params is not None:
        out["params"] = asdict(params)
        out["regime"] = params.regime().value
    out["grid"] = {"omega_max": grid.omega_max, "t_max": grid.t_max, "n_coeffs": grid.n_coeffs, "step": grid.step}
    out.update(extra)
    return out


def write_json(path, payload: Mapping) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def grid_from_sidecar(meta: Mapping) -> GridConfig:
    g = meta["grid"]
    return GridConfig(float(g["omega_max"]), float(g["t_max"]), int(g["n_coeffs"]))
