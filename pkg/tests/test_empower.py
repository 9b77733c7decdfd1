"""Far-zone power accounting and the screen interference integral."""

from __future__ import annotations

import numpy as np
import pytest

from uniscat import (
    EXTINCTION_FACTOR,
    AmplitudeTable,
    ConstructionParams,
    PowerCurve,
    PowerSummary,
    ScreenSpec,
    SparseArcWarning,
    WaveContext,
    amplitude_table,
    build_potential_2d,
    closed_form_f_left,
    delta_u_S,
    fig2_curves,
    quartic_envelope,
    screen_power,
    screen_power_oracle,
    total_power_changes,
    xi,
)
from uniscat.empower import G7_WEIGHTS, GK_NODES, GK_WEIGHTS, _gk_panels

CTX = WaveContext(k=4 * np.pi)


def _params(g0=1e-2, k=4 * np.pi):
    return ConstructionParams(
        ell=-1, m=1, envelope=quartic_envelope(g0, 1.0), ctx=WaveContext(k=k), slab=1.0
    )


def _flat_table(side, value, n=801):
    """A synthetic amplitude, constant over both arcs."""
    fwd = np.linspace(-1.5, 1.5, n)
    back = np.linspace(np.pi - 1.5, np.pi + 1.5, n)
    th = np.concatenate([fwd, back])
    return AmplitudeTable(
        side=side,
        thetas=th,
        values=np.full(th.shape, value, dtype=complex),
        method="born",
        ctx=CTX,
    )


def test_kronrod_constants():
    assert GK_NODES.shape == (15,)
    assert np.allclose(np.sort(GK_NODES), GK_NODES)
    assert np.allclose(GK_NODES + GK_NODES[::-1], 0.0, atol=1e-15)
    assert np.sum(GK_WEIGHTS) == pytest.approx(2.0, abs=1e-14)
    assert np.sum(G7_WEIGHTS) == pytest.approx(2.0, abs=1e-14)
    # the embedded 7-point rule lives on the odd-index nodes only
    assert np.all(G7_WEIGHTS[0::2] == 0.0)


def test_gk_panels_integrate_polynomials():
    # k15 is exact through degree 22; x^8 over split panels
    k15, err = _gk_panels(lambda y: y**8, np.array([0.0, 0.5]), np.array([0.5, 1.0]))
    assert np.sum(k15) == pytest.approx(1.0 / 9.0, rel=1e-14)
    assert np.all(err < 1e-12)


def test_constant_amplitude_power_oracle():
    c1, c2 = 0.3 - 0.2j, 0.1 + 0.5j
    span = 3.0  # each sampled arc covers 3 radians
    summary = total_power_changes(_flat_table("left", c1), _flat_table("right", c2))
    assert summary.left_backward == pytest.approx(abs(c1) ** 2 * span, rel=1e-12)
    assert summary.left_forward == pytest.approx(
        abs(c1) ** 2 * span - EXTINCTION_FACTOR * c1.imag, rel=1e-12
    )
    assert summary.right_backward == pytest.approx(
        abs(c2) ** 2 * span - EXTINCTION_FACTOR * c2.imag, rel=1e-12
    )
    assert summary.right_forward == pytest.approx(abs(c2) ** 2 * span, rel=1e-12)
    assert summary.left_total == summary.left_backward + summary.left_forward
    assert summary.right_total == summary.right_backward + summary.right_forward


def test_zero_amplitude_changes_nothing():
    summary = total_power_changes(_flat_table("left", 0.0), _flat_table("right", 0.0))
    assert summary == PowerSummary(0.0, 0.0, 0.0, 0.0)


def test_side_order_is_enforced():
    with pytest.raises(ValueError):
        total_power_changes(_flat_table("right", 1.0), _flat_table("right", 1.0))


def test_sparse_arc_warning():
    th = np.concatenate([np.linspace(-1.5, 1.5, 9), np.linspace(np.pi - 1.5, np.pi + 1.5, 40)])
    table = AmplitudeTable(
        side="left", thetas=th, values=np.ones(th.shape, complex), method="born", ctx=CTX
    )
    with pytest.warns(SparseArcWarning):
        total_power_changes(table, _flat_table("right", 0.0))


def test_one_way_power_budget_of_the_construction():
    v = build_potential_2d(_params())
    margin = 2e-3
    fwd = np.linspace(-np.pi / 2 + margin, np.pi / 2 - margin, 1201)
    back = np.pi - fwd
    th = np.concatenate([fwd, back])
    f_left = amplitude_table(v, "left", th)
    f_right = amplitude_table(v, "right", th)
    summary = total_power_changes(f_left, f_right)
    left_scale = max(abs(summary.left_backward), abs(summary.left_forward))
    assert left_scale > 0.0
    assert summary.left_backward > 0.0
    assert abs(summary.right_backward) < 1e-12 * left_scale
    assert abs(summary.right_forward) < 1e-12 * left_scale


def test_xi_inverse_square_root_falloff():
    table = _flat_table("left", 1.0)
    r = 7.0
    # theta = 0 kills the phase, so the r dependence is the prefactor alone
    a = xi(table, r, 0.0)
    b = xi(table, 4.0 * r, 0.0)
    assert a == pytest.approx(np.cos(np.pi / 4.0) / np.sqrt(CTX.k * r), rel=1e-14)
    assert a / b == pytest.approx(2.0, rel=1e-14)


def test_xi_accepts_the_construction_directly():
    params = _params()
    r, th = 50.0, 0.4
    want = np.real(
        np.exp(1j * (np.pi / 4.0 + params.ctx.k * r * (1.0 - np.cos(th))))
        / np.sqrt(params.ctx.k * r)
        * closed_form_f_left(params, th)
    )
    assert xi(params, r, th) == pytest.approx(want, rel=1e-14)
    with pytest.raises(TypeError):
        xi("not a source", 1.0, 0.0)


def test_pointwise_screen_observables():
    theta = np.array([0.0, 0.3, -0.9])
    xival = np.array([0.5, -0.2, 0.1])
    du, (sx, sy) = delta_u_S(xival, theta)
    assert np.array_equal(du, (1.0 + np.cos(theta)) * xival)
    assert np.array_equal(du, sx)  # the intensity change is the axial flux
    assert np.array_equal(sy, np.sin(theta) * xival)
    assert du[0] == 2.0 * xival[0] and sy[0] == 0.0


def test_screen_power_against_the_independent_rule():
    params = _params()
    for s in (1.0, 10.0, 50.0):
        a = screen_power(params, ScreenSpec(d=100.0, s=s))
        b = screen_power_oracle(params, ScreenSpec(d=100.0, s=s))
        assert abs(a - b) < 1e-12


def test_screen_power_is_exactly_linear_in_the_envelope():
    spec = ScreenSpec(d=100.0, s=10.0)
    p1 = screen_power(_params(g0=1e-2), spec)
    p2 = screen_power(_params(g0=2e-2), spec)
    assert p1 != 0.0
    assert p2 == pytest.approx(2.0 * p1, rel=1e-13)


def test_screen_power_vanishes_with_the_width():
    params = _params()
    tiny = abs(screen_power(params, ScreenSpec(d=100.0, s=1e-3)))
    bulk = np.max(
        np.abs([screen_power(params, ScreenSpec(d=100.0, s=s)) for s in (5.0, 20.0, 60.0)])
    )
    assert tiny < 1e-4 * bulk


def test_screen_spec_validation():
    with pytest.raises(ValueError):
        ScreenSpec(d=0.0, s=1.0)
    with pytest.raises(ValueError):
        ScreenSpec(d=1.0, s=-2.0)


def test_fig2_curves_layout_and_determinism():
    s = np.linspace(1.0, 12.0, 7)
    a, = fig2_curves(s_values=s, ks=[4 * np.pi])
    b, = fig2_curves(s_values=s, ks=[4 * np.pi])
    assert isinstance(a, PowerCurve)
    assert a.k == 4 * np.pi and a.d == 100.0
    assert np.array_equal(a.s_values, s)
    assert np.all(np.isfinite(a.values))
    assert np.array_equal(a.values, b.values)
    assert "ell=-1" in a.label
