import json
import subprocess
import sys

import numpy as np
import pytest

from scattering import OscillatorParams, make_grid
from scattering import io
from scattering.cli import main
from scattering.closed_form import a1_closed, a2_closed
from scattering.identify import sample_h1
from scattering.model import grid_with_count

FIG1 = ["--b", "0.3", "--omega0", "2", "--epsilon", "1", "--omega-max", "20", "--t-max", "20"]


def run(*argv):
    return main([str(a) for a in argv])


def header(path):
    return path.read_text().splitlines()[0]


def test_coeffs_closed(tmp_path):
    assert run("coeffs", *FIG1, "--out", tmp_path) == 0
    lines = (tmp_path / "coeffs1.csv").read_text().splitlines()
    assert lines[0] == "k,a1"
    assert len(lines) == 1 + 129
    assert header(tmp_path / "coeffs2.csv") == "k,l,a2"
    p = OscillatorParams(0.3, 2.0, 1.0)
    g = make_grid(20.0, 20.0)
    np.testing.assert_array_equal(io.read_coeffs1(tmp_path / "coeffs1.csv", g).values, a1_closed(p, g).values)
    np.testing.assert_array_equal(io.read_coeffs2(tmp_path / "coeffs2.csv", g).values, a2_closed(p, g).values)
    meta = json.loads((tmp_path / "coeffs.json").read_text())
    assert meta["method"] == "closed"
    assert meta["params"] == {"b": 0.3, "omega0": 2.0, "epsilon": 1.0}
    assert meta["grid"]["n_coeffs"] == 129 - 1
    assert meta["regime"] == "underdamped"


def test_coeffs_recurrence_reports_deviation(tmp_path, capsys):
    assert run("coeffs", "--b", "5", "--method", "recurrence", "--out", tmp_path) == 0
    assert "max |recurrence - closed|" in capsys.readouterr().out
    meta = json.loads((tmp_path / "coeffs.json").read_text())
    assert set(meta["max_deviation_vs_closed"]) == {"a1", "a2"}
    assert header(tmp_path / "coeffs1.csv") == "k,a1"


def test_corrected_frequency_domain_error(tmp_path, capsys):
    code = run("coeffs", "--corrected-frequency", "--input", "step:-10", "--out", tmp_path)
    assert code == 2
    assert "no real corrected frequency" in capsys.readouterr().err


def test_corrected_coeffs_first_order_only(tmp_path):
    assert run("coeffs", "--corrected-frequency", "--input", "step:1", "--out", tmp_path) == 0
    assert not (tmp_path / "coeffs2.csv").exists()
    meta = json.loads((tmp_path / "coeffs.json").read_text())
    assert meta["corrected_frequency"]["omega0_corrected"] == pytest.approx(2.109381, abs=1e-6)
    assert run("coeffs", "--corrected-frequency", "--order", "2", "--input", "step:1", "--out", tmp_path) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["coeffs", "--b", "-1"],
        ["coeffs", "--omega-max", "0"],
    ],
)
def test_domain_errors(tmp_path, argv):
    assert run(*argv, "--out", tmp_path) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["coeffs", "--input", "ramp:1"],
        ["coeffs", "--corrected-frequency", "--input", "sine:1:0.5"],
        ["coeffs", "--method", "bogus"],
        ["simulate", "--method", "identified", "--order", "2"],
        ["simulate", "--method", "identified"],
        ["reproduce", "7"],
        ["reproduce", "x"],
    ],
)
def test_config_errors(tmp_path, argv):
    assert run(*argv, "--out", tmp_path) == 3


def test_usage_errors():
    assert main([]) == 3
    assert main(["coeffs", "--b", "abc"]) == 3
    assert main(["--help"]) == 0


def test_simulate_columns(tmp_path, capsys):
    assert run("simulate", *FIG1, "--out", tmp_path) == 0
    assert header(tmp_path / "response.csv") == "t,y1,y2,total,oracle"
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["metrics"]["rel_rms_total"] < summary["metrics"]["rel_rms_first_order"] <= 0.1
    assert "rel_rms_total" in capsys.readouterr().out


def test_simulate_corrected_column(tmp_path):
    assert run("simulate", *FIG1, "--input", "step:1", "--corrected-frequency", "--out", tmp_path) == 0
    table = io.read_table(tmp_path / "response.csv")
    assert list(table) == ["t", "y1", "y2", "total", "oracle", "y1_corrected"]
    assert not np.array_equal(table["y1"], table["y1_corrected"])


def test_simulate_zero_input(tmp_path):
    assert run("simulate", "--input", "step:0", "--out", tmp_path) == 0
    table = io.read_table(tmp_path / "response.csv")
    for name in ("y1", "y2", "total", "oracle"):
        assert not table[name].any()
    assert json.loads((tmp_path / "summary.json").read_text())["metrics"]["rel_rms_total"] is None


def test_outputs_are_deterministic(tmp_path):
    for d in ("a", "b"):
        assert run("simulate", *FIG1, "--out", tmp_path / d) == 0
        assert run("coeffs", *FIG1, "--out", tmp_path / d) == 0
    for name in ("response.csv", "summary.json", "coeffs1.csv", "coeffs2.csv", "coeffs.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("method", ["closed", "recurrence"])
def test_coefficient_round_trip(tmp_path, method):
    args = [*FIG1, "--b", "5", "--input", "step:1", "--method", method]
    assert run("coeffs", *args, "--out", tmp_path / "c") == 0
    assert run("simulate", *args, "--out", tmp_path / "mem") == 0
    assert run("simulate", *args, "--coeffs-dir", tmp_path / "c", "--out", tmp_path / "disk") == 0
    assert (tmp_path / "mem" / "response.csv").read_bytes() == (tmp_path / "disk" / "response.csv").read_bytes()


def test_round_trip_rejects_other_parameters(tmp_path):
    assert run("coeffs", *FIG1, "--out", tmp_path / "c") == 0
    assert run("simulate", "--b", "0.5", "--coeffs-dir", tmp_path / "c", "--out", tmp_path / "s") == 3
    assert run("simulate", "--omega-max", "30", "--coeffs-dir", tmp_path / "c", "--out", tmp_path / "s") == 3


def test_simulate_from_measurements(tmp_path):
    meas = tmp_path / "m.csv"
    io.write_measurements(meas, sample_h1(OscillatorParams(0.3, 2.0), np.linspace(0, 20, 300)))
    assert run("simulate", *FIG1, "--method", "identified", "--measurements", meas, "--out", tmp_path) == 0
    table = io.read_table(tmp_path / "response.csv")
    assert not table["y2"].any()


def write_h1(path, parts="both", n=200):
    io.write_measurements(path, sample_h1(OscillatorParams(0.3, 2.0), np.linspace(0, 20, n), parts))


def test_identify(tmp_path, capsys):
    meas = tmp_path / "m.csv"
    write_h1(meas)
    assert header(meas) == "omega,reh,imh"
    assert run("identify", meas, "--n-coeffs", "100", "--input", "sine:1:0.5", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "identify_report.json").read_text())
    assert report["a0_determined"] is True
    assert report["rows"] == 400
    assert report["condition"] < 1e6
    g = grid_with_count(20.0, 100)
    fit = io.read_coeffs1(tmp_path / "identified_coeffs.csv", g).values
    closed = a1_closed(OscillatorParams(0.3, 2.0), g).values
    assert np.abs(fit - closed).max() <= 0.05 * np.abs(closed).max()
    assert header(tmp_path / "prediction.csv") == "t,x,y"
    assert "condition" in capsys.readouterr().out


def test_identify_imaginary_only(tmp_path, capsys):
    meas = tmp_path / "m.csv"
    write_h1(meas, parts="im")
    assert header(meas) == "omega,imh"
    assert run("identify", meas, "--n-coeffs", "100", "--out", tmp_path) == 0
    assert json.loads((tmp_path / "identify_report.json").read_text())["a0_determined"] is False
    assert "indeterminate" in capsys.readouterr().out


def test_identify_underdetermined(tmp_path, capsys):
    meas = tmp_path / "m.csv"
    write_h1(meas, n=20)
    assert run("identify", meas, "--n-coeffs", "100", "--out", tmp_path) == 2
    err = capsys.readouterr().err
    assert "N=100" in err and "40 data rows" in err


@pytest.mark.parametrize(
    "content,line",
    [
        ("", 1),
        ("freq,reh\n1,2\n", 1),
        ("omega\n1\n", 1),
        ("omega,reh\n1,2\n2,abc\n", 3),
        ("omega,reh,imh\n1,2,3\n4,5\n", 3),
        ("omega,reh\n1,2\n,3\n", 3),
        ("omega,reh\n", 2),
    ],
)
def test_identify_parse_errors(tmp_path, capsys, content, line):
    meas = tmp_path / "m.csv"
    meas.write_text(content)
    assert run("identify", meas, "--out", tmp_path) == 1
    assert f"m.csv:{line}:" in capsys.readouterr().err


def test_measurements_extra_columns_and_gaps(tmp_path):
    meas = tmp_path / "m.csv"
    meas.write_text("omega,reh,imh,note\n0,0.25,,a\n1,0.3,-0.1,b\n")
    with pytest.warns(UserWarning, match="note"):
        s = io.read_measurements(meas)
    assert s.n_real == 2 and s.n_imag == 1


def test_identify_missing_file(tmp_path):
    assert run("identify", tmp_path / "nope.csv", "--out", tmp_path) == 1


def test_coeff_file_parse_errors(tmp_path):
    g = grid_with_count(20.0, 2)
    bad = tmp_path / "c.csv"
    bad.write_text("k,a1\n0,0\n1,1\n")
    with pytest.raises(io.ParseError, match="expected indices"):
        io.read_coeffs1(bad, g)
    bad.write_text("k,b\n")
    with pytest.raises(io.ParseError):
        io.read_coeffs1(bad, g)


@pytest.mark.parametrize("figure,expected", [("1", "rel_rms_second_order"), ("3", "freq_y1_corrected"),
                                             ("5", "max_coeff_deviation_rel")])
def test_reproduce(tmp_path, capsys, figure, expected):
    assert run("reproduce", figure, "--out", tmp_path) == 0
    assert expected in capsys.readouterr().out
    for suffix in ("csv", "json", "png"):
        assert (tmp_path / f"fig{figure}.{suffix}").stat().st_size > 0
    meta = json.loads((tmp_path / f"fig{figure}.json").read_text())
    assert meta["figure"] == int(figure)
    assert expected in meta["metrics"]


def test_reproduce_headers(tmp_path):
    assert run("reproduce", "all", "--no-plot", "--out", tmp_path) == 0
    assert header(tmp_path / "fig1.csv") == "t,exact,y1,y2,y1_plus_y2"
    assert header(tmp_path / "fig3.csv") == "t,exact,y1,y1_corrected"
    assert header(tmp_path / "fig4.csv") == "t,y2_closed,y2_recurrence"
    assert not list(tmp_path.glob("*.png"))


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "scattering", "reproduce", "2", "--no-plot", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert "figure 2:" in res.stdout
