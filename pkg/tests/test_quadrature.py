import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fracops.errors import DomainError, GridMismatchError, UnknownPresetError
from fracops.kernels import OperatorSpec
from fracops.quadrature import (
    PRESETS,
    Signal,
    SourceFunction,
    TimeGrid,
    apply_operator,
    preset_function,
    preset_samples,
)

ALL_SPECS = [
    OperatorSpec("C", 0.5),
    OperatorSpec("C", 8 / 9),
    OperatorSpec("CF", 0.4, 1.0),
    OperatorSpec("AB", 2 / 3, 1.0),
    OperatorSpec("DS", 2 / 3, 1 / 3),
    OperatorSpec("DC", 2 / 3, 1 / 3),
]
SPEC_IDS = ["C-1/2", "C-8/9", "CF", "AB", "DS", "DC"]


def convolution_oracle(kernel, derivative, lam):
    """Symbolic int_0^t kernel(lam (t - tau)) derivative(tau) dtau as a numpy function."""
    t, tau = sp.symbols("t tau", positive=True)
    expr = sp.integrate(kernel(lam * (t - tau)) * derivative(tau), (tau, 0, t))
    return sp.lambdify(t, sp.simplify(expr), "numpy")


def test_time_grid():
    g = TimeGrid(0.5, 4)
    assert np.array_equal(g.nodes, [0, 0.5, 1.0, 1.5, 2.0])
    assert g.t_max == 2.0
    assert TimeGrid.from_span(10.0, 1e-3).n == 10_000
    for dt, n in [(0.0, 3), (-1.0, 3), (0.1, 0), (0.1, 2.5)]:
        with pytest.raises(DomainError):
            TimeGrid(dt, n)


def test_signal_validation():
    g = TimeGrid(0.1, 3)
    with pytest.raises(GridMismatchError):
        Signal(g, np.zeros(3))
    with pytest.raises(DomainError):
        Signal(g, [0, 1, np.nan, 2])


def test_source_validation():
    g = TimeGrid(0.1, 3)
    with pytest.raises(GridMismatchError):
        SourceFunction.sampled(g, [0, 1, 2])
    with pytest.raises(DomainError):
        SourceFunction(derivative_eval=np.cos, samples=np.zeros(4), grid=g)
    with pytest.raises(DomainError):
        SourceFunction(samples=np.zeros(4), grid=g, f0=1.0)


def test_presets():
    assert preset_function("cube").derivative_eval(2.0) == 4.0
    assert preset_function("negcos").f0 == -1.0
    assert preset_function("exp").derivative_eval(0.0) == 1.0
    assert preset_function("sin").derivative_eval(0.0) == 1.0
    with pytest.raises(UnknownPresetError):
        preset_function("tan")


def test_ds_of_identity():
    grid = TimeGrid(1e-3, 10_000)
    out = apply_operator(OperatorSpec("DS", 2 / 3, 1 / 3), SourceFunction.analytic(lambda t: 1.0), grid)
    t = grid.nodes
    assert np.max(np.abs(out.values - (1 - np.cos(2 * t)) / 2)) < 1e-10
    assert out.at(math.pi / 2) == pytest.approx(1.0, abs=1e-5)


def test_dc_of_identity():
    grid = TimeGrid(1e-3, 10_000)
    out = apply_operator(OperatorSpec("DC", 2 / 3, 1 / 3), SourceFunction.analytic(lambda t: 1.0), grid)
    t = grid.nodes
    assert np.max(np.abs(out.values - np.sin(2 * t) / 2)) < 1e-10
    assert out.at(math.pi / 4) == pytest.approx(0.5, abs=1e-5)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.75])
def test_caputo_of_identity(alpha):
    # D^alpha t = t**(1 - alpha) / Gamma(2 - alpha); exact for linear f in both modes
    grid = TimeGrid(1e-2, 500)
    t = grid.nodes
    expected = t ** (1 - alpha) / math.gamma(2 - alpha)
    for source in (SourceFunction.analytic(lambda s: 1.0), SourceFunction.sampled(grid, t)):
        out = apply_operator(OperatorSpec("C", alpha), source, grid)
        assert np.allclose(out.values, expected, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize(
    "kernel, kind",
    [(sp.sin, "DS"), (sp.cos, "DC"), (lambda x: sp.exp(-x), "CF")],
)
@pytest.mark.parametrize("preset", ["cube", "negcos", "sin", "exp"])
def test_exponential_family_against_symbolic_convolution(kernel, kind, preset):
    derivatives = {"cube": lambda s: s**2, "negcos": sp.sin, "sin": sp.cos, "exp": sp.exp}
    alpha, norm = 2 / 3, 1 / 3
    oracle = convolution_oracle(kernel, derivatives[preset], sp.Integer(2))
    grid = TimeGrid(1e-3, 5000)
    out = apply_operator(OperatorSpec(kind, alpha, norm), preset_function(preset), grid)
    t = grid.nodes[1:]
    expected = oracle(t)
    assert np.max(np.abs(out.values[1:] - expected) / np.maximum(1.0, np.abs(expected))) < 1e-6


def test_sin_preset_row_at_pi():
    grid = TimeGrid(1e-3, 10_000)
    out = apply_operator(OperatorSpec("DS", 2 / 3, 1 / 3), preset_function("sin"), grid)
    i = grid.index_of(math.pi)
    t = grid.nodes[i]
    # int_0^t sin(2(t - tau)) cos(tau) dtau = (2/3)(cos t - cos 2t)
    assert out.values[i] == pytest.approx(2 / 3 * (math.cos(t) - math.cos(2 * t)), abs=1e-6)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=SPEC_IDS)
def test_constant_source_is_annihilated(spec):
    grid = TimeGrid(0.01, 300)
    for source in (SourceFunction.analytic(lambda t: 0.0, 5.0),
                   SourceFunction.sampled(grid, np.full(301, 5.0))):
        out = apply_operator(spec, source, grid)
        assert np.all(out.values == 0.0)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=SPEC_IDS)
def test_zero_at_origin(spec):
    grid = TimeGrid(0.01, 50)
    assert apply_operator(spec, preset_function("exp"), grid).values[0] == 0.0


def test_single_step_grid():
    grid = TimeGrid(0.1, 1)
    out = apply_operator(OperatorSpec("DS", 2 / 3, 1 / 3), SourceFunction.analytic(lambda t: 1.0), grid)
    assert out.values[0] == 0.0
    assert out.values[1] == pytest.approx((1 - math.cos(0.2)) / 2, rel=1e-14)


def _combine(a, f, b, g):
    return SourceFunction.analytic(
        lambda t: a * f.derivative_at(t) + b * g.derivative_at(t), a * f.f0 + b * g.f0
    )


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(range(len(ALL_SPECS))),
    st.sampled_from(sorted(PRESETS)),
    st.sampled_from(sorted(PRESETS)),
    st.floats(-2.0, 2.0),
    st.floats(-2.0, 2.0),
)
def test_linearity(spec_index, p, q, a, b):
    spec = ALL_SPECS[spec_index]
    grid = TimeGrid(0.01, 200)
    f, g = preset_function(p), preset_function(q)
    lhs = apply_operator(spec, _combine(a, f, b, g), grid).values
    rhs = a * apply_operator(spec, f, grid).values + b * apply_operator(spec, g, grid).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_grid_mismatch():
    g1, g2 = TimeGrid(0.1, 10), TimeGrid(0.1, 11)
    src = preset_samples("sin", g1)
    with pytest.raises(GridMismatchError):
        apply_operator(OperatorSpec("DS", 0.5, 1.0), src, g2)


def _order(values):
    e1 = abs(values[0] - values[1])
    e2 = abs(values[1] - values[2])
    return math.log2(e1 / e2)


@pytest.mark.parametrize("kind", ["DS", "DC"])
@pytest.mark.parametrize("preset", ["cube", "negcos", "sin", "exp"])
def test_second_order_refinement(kind, preset):
    spec = OperatorSpec(kind, 2 / 3, 1 / 3)
    t_probe = 3.0
    values = []
    for dt in (4e-3, 2e-3, 1e-3):
        grid = TimeGrid.from_span(4.0, dt)
        values.append(apply_operator(spec, preset_function(preset), grid).at(t_probe))
    assert _order(values) >= 1.9


@pytest.mark.parametrize("kind", ["DS", "DC", "CF"])
@pytest.mark.parametrize("preset", ["negcos", "sin", "exp"])
def test_analytic_and_sampled_modes_agree(kind, preset):
    spec = OperatorSpec(kind, 2 / 3, 1 / 3)
    gaps = []
    for dt in (2e-3, 1e-3):
        grid = TimeGrid.from_span(4.0, dt)
        a = apply_operator(spec, preset_function(preset), grid).values
        s = apply_operator(spec, preset_samples(preset, grid), grid).values
        gaps.append(np.max(np.abs(a - s) / np.maximum(1.0, np.abs(a))))
    assert gaps[1] < 1e-5
    assert math.log2(gaps[0] / gaps[1]) > 1.8


@pytest.mark.parametrize("alpha", [0.5, 2 / 3, 8 / 9])
def test_caputo_l1_convergence(alpha):
    exact = 2.0 / math.gamma(3 - alpha)
    errors = []
    for dt in (2e-3, 1e-3):
        grid = TimeGrid.from_span(1.0, dt)
        out = apply_operator(OperatorSpec("C", alpha), SourceFunction.sampled(grid, grid.nodes**2), grid)
        errors.append(abs(out.values[-1] - exact) / exact)
    assert math.log2(errors[0] / errors[1]) == pytest.approx(2 - alpha, abs=0.2)


def test_caputo_order_one_is_classical_derivative():
    grid = TimeGrid(0.01, 100)
    spec = OperatorSpec("C", 1.0)
    analytic = apply_operator(spec, preset_function("sin"), grid).values
    assert np.array_equal(analytic[1:], np.cos(grid.nodes[1:]))
    sampled = apply_operator(spec, preset_samples("sin", grid), grid).values
    assert np.allclose(sampled[1:], np.diff(np.sin(grid.nodes)) / 0.01)


def test_ab_against_dense_gauss_reference():
    grid = TimeGrid(0.01, 400)
    spec = OperatorSpec("AB", 0.6, 1.0)
    got = apply_operator(spec, preset_function("sin"), grid).values
    ref = apply_operator(spec, preset_function("sin"), grid, ab_nodes=64).values
    assert 0.0 < np.max(np.abs(got - ref)) < 1e-5


def test_deterministic_output():
    grid = TimeGrid(0.01, 500)
    for spec in ALL_SPECS:
        a = apply_operator(spec, preset_function("negcos"), grid).values
        b = apply_operator(spec, preset_function("negcos"), grid).values
        assert a.tobytes() == b.tobytes()
