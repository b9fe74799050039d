import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reference import rel_rms
from scattering import OscillatorParams, make_grid
from scattering.closed_form import a1_closed, a2_closed
from scattering.model import Coeffs1, Coeffs2, GridMismatchError, Signal, grid_with_count
from scattering.oracle import integrate_linear, integrate_perturbative
from scattering.response import (
    Sine,
    Step,
    delay_matrix,
    make_input,
    parse_input,
    synthesize,
    synthesize_first,
    synthesize_second,
)

G = grid_with_count(20.0, 30)
P = OscillatorParams(0.3, 2.0, 1.0)
C1 = a1_closed(P, G)
C2 = a2_closed(P, G)

signals = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=45).map(
    lambda xs: Signal(np.array(xs), G.step)
)


def test_delay_matrix():
    X = delay_matrix(np.array([1.0, 2.0, 3.0]), 4)
    np.testing.assert_array_equal(X, [[1, 0, 0, 0, 0], [2, 1, 0, 0, 0], [3, 2, 1, 0, 0]])


def test_pure_delay():
    a = np.zeros(G.n_coeffs + 1)
    a[3] = 1.0
    y = synthesize_first(Coeffs1(a, G), make_input(Step(1.0), G))
    np.testing.assert_array_equal(y.samples, (np.arange(len(y)) >= 3).astype(float))


def test_zero_input():
    x = Signal(np.zeros(20), G.step)
    assert not synthesize_first(C1, x).samples.any()
    assert not synthesize_second(C2, x).samples.any()


def test_output_length_follows_input():
    x = Signal(np.ones(200), G.step)
    assert len(synthesize_first(C1, x)) == 200
    assert len(synthesize_second(C2, x)) == 200


def test_second_order_direct_sum():
    x = Signal(np.random.default_rng(1).normal(size=12), G.step)
    A, xs = C2.values, x.samples
    expected = [
        sum(A[k, l] * xs[j - k] * xs[j - l] for k in range(j + 1) for l in range(j + 1)) for j in range(len(xs))
    ]
    np.testing.assert_allclose(synthesize_second(C2, x).samples, expected, rtol=1e-12, atol=1e-18)


@given(signals, st.integers(0, 40))
def test_causality(x, j0):
    s = x.samples.copy()
    s[: min(j0, len(s))] = 0.0
    x = Signal(s, x.step)
    assert not synthesize_first(C1, x).samples[:j0].any()
    assert not synthesize_second(C2, x).samples[:j0].any()


@given(signals, st.integers(1, 10))
def test_time_invariance(x, d):
    keep = max(len(x) - d, 0)
    y1 = synthesize_first(C1, x).samples
    y2 = synthesize_second(C2, x).samples
    np.testing.assert_allclose(synthesize_first(C1, x.delayed(d)).samples[d:], y1[:keep], rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(synthesize_second(C2, x.delayed(d)).samples[d:], y2[:keep], rtol=1e-12, atol=1e-15)


@given(signals, st.floats(-5, 5, allow_nan=False).filter(lambda c: abs(c) > 1e-3))
def test_homogeneity(x, c):
    cx = Signal(c * x.samples, x.step)
    y1, y2 = synthesize_first(C1, x).samples, synthesize_second(C2, x).samples
    np.testing.assert_allclose(synthesize_first(C1, cx).samples, c * y1, rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(synthesize_second(C2, cx).samples, c * c * y2, rtol=1e-12, atol=1e-13)


def test_superposition_first_holds_second_fails():
    g = make_grid(20.0, 20.0)
    c1, c2 = a1_closed(P, g), a2_closed(P, g)
    x1 = make_input(Sine(1.0, 0.5), g)
    x2 = make_input(Sine(1.0, 1.7), g)
    x12 = Signal(x1.samples + x2.samples, g.step)
    y1 = synthesize_first(c1, x12).samples
    np.testing.assert_allclose(y1, synthesize_first(c1, x1).samples + synthesize_first(c1, x2).samples, atol=1e-14)
    lhs = synthesize_second(c2, x12).samples
    rhs = synthesize_second(c2, x1).samples + synthesize_second(c2, x2).samples
    cross = np.einsum("jk,kl,jl->j", delay_matrix(x1.samples, g.n_coeffs), c2.values, delay_matrix(x2.samples, g.n_coeffs))
    assert np.abs(lhs - rhs).max() > 0.1 * np.abs(lhs).max()
    np.testing.assert_allclose(lhs - rhs, 2 * cross, atol=1e-14)


@settings(max_examples=30)
@given(signals)
def test_symmetric_sum_matches(x):
    full = synthesize_second(C2, x).samples
    tri = synthesize_second(C2, x, use_symmetry=True).samples
    scale = max(np.abs(full).max(), 1e-300)
    assert np.abs(full - tri).max() <= 1e-14 * scale


def test_breakdown_total_exact():
    r = synthesize(C1, C2, make_input(Sine(1.0, 0.5), G))
    np.testing.assert_array_equal(r.total.samples, r.first_order.samples + r.second_order.samples)


def test_linear_system_total_is_first_order():
    p = P.linear()
    r = synthesize(a1_closed(p, G), Coeffs2.zeros(G), make_input(Step(1.0), G))
    np.testing.assert_array_equal(r.total.samples, r.first_order.samples)


def test_grid_mismatch():
    other = Signal(np.ones(10), G.step * 1.01)
    with pytest.raises(GridMismatchError):
        synthesize_first(C1, other)
    with pytest.raises(GridMismatchError):
        synthesize_second(C2, other)
    with pytest.raises(GridMismatchError):
        synthesize(C1, Coeffs2.zeros(grid_with_count(21.0, 30)), make_input(Step(1.0), G))


def test_make_input():
    g = make_grid(20.0, 20.0)
    step = make_input(Step(1.0), g)
    assert len(step) == g.n_coeffs + 1
    np.testing.assert_array_equal(step.samples, 1.0)
    sine = make_input(Sine(1.0, 0.5), g)
    assert sine.samples[0] == 0.0
    assert sine.samples[20] == pytest.approx(1.0, abs=1e-15)  # t = 20 * pi / 20 = pi
    assert len(make_input(Step(2.0), g, n_samples=7)) == 7
    assert step.source is not None and step.source(-0.1) == 0.0 and step.source(0.0) == 1.0


@pytest.mark.parametrize(
    "text,expected", [("step:1", Step(1.0)), ("step:-2.5", Step(-2.5)), ("sine:1:0.5", Sine(1.0, 0.5)),
                      ("sine:2e-1:.5", Sine(0.2, 0.5))]
)
def test_parse_input(text, expected):
    assert parse_input(text) == expected
    assert parse_input(str(expected)) == expected


@pytest.mark.parametrize("text", ["ramp:1", "step", "sine:1", "step:abc", ""])
def test_parse_input_rejects(text):
    with pytest.raises(ValueError):
        parse_input(text)


def test_first_order_matches_linear_oracle():
    g = make_grid(20.0, 20.0)
    x = make_input(Sine(1.0, 0.5), g)
    y1 = synthesize_first(a1_closed(P, g), x)
    ref = integrate_linear(P, x)
    assert rel_rms(y1.samples, ref.samples) <= 0.03  # 0.0077 observed


def test_second_order_matches_correction_oracle():
    p = OscillatorParams(5.0, 2.0, 1.0)
    g = make_grid(20.0, 20.0)
    x = make_input(Step(1.0), g)
    y2 = synthesize_second(a2_closed(p, g), x)
    _, ref = integrate_perturbative(p, x)
    assert rel_rms(y2.samples, ref.samples) <= 0.05
