import math

import numba
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import phi_plane_wave
from grapheneplasmon.errors import IncompleteHistory, OutOfStencil
from grapheneplasmon.grid import StateHistory, build_grid
from grapheneplasmon.marcher import sample_history
from grapheneplasmon.phi import build_weights, check_stencil, eval_F, eval_F_layer


def random_history(grid, seed):
    rng = np.random.default_rng(seed)
    h = StateHistory(grid)
    for k in range(1, grid.n + 1):
        size = grid.layer_size(k)
        h.append(rng.standard_normal(size) + 1j * rng.standard_normal(size))
    return h


def test_small_weight_rows():
    w = build_weights(2)
    assert list(w.row(1)) == [1.0]
    np.testing.assert_allclose(w.row(2), [math.sqrt(3) / 4, 0.5, math.sqrt(3) / 4], rtol=1e-15)
    assert w.weight(2, 2) == 0.0
    assert w.flat.size == 4


def test_weight_row_is_a_semicircle_riemann_sum():
    w = build_weights(64)
    assert w.row(64).sum() == pytest.approx(math.pi / 2, rel=0.02)


def test_build_weights_rejects_empty():
    with pytest.raises(ValueError):
        build_weights(0)


def test_F_vanishes_at_t0():
    g = build_grid(0.1, 3, 4)
    h = random_history(g, 0)
    w = build_weights(4)
    assert np.all(eval_F_layer(h, w, 0) == 0)
    assert eval_F(h, w, -7, 0) == 0


@pytest.mark.parametrize("dx", [0.01, 0.005])
def test_F_of_parabola_tracks_pi_t(dx):
    # v_xx = 2 for t > 0, so Phi = pi t; the lattice sum is low by a few dx
    g = build_grid(dx, 5, 40)
    h = sample_history(g, lambda x, t: x * x + 0j)
    w = build_weights(40)
    for k in (10, 20, 40):
        F = eval_F_layer(h, w, k)
        assert np.allclose(F, math.pi * k * dx, atol=5 * dx)


def test_F_requires_complete_layers():
    g = build_grid(0.1, 2, 3)
    h = StateHistory(g)
    w = build_weights(3)
    with pytest.raises(IncompleteHistory):
        eval_F_layer(h, w, 1)


def test_F_rejects_nodes_without_a_stencil():
    g = build_grid(0.1, 2, 3)
    h = random_history(g, 1)
    w = build_weights(3)
    with pytest.raises(OutOfStencil):
        eval_F(h, w, g.half_width(2), 2)


def test_debug_check_accepts_every_marcher_target():
    g = build_grid(0.1, 3, 6)
    h = random_history(g, 2)
    for k in range(1, g.n):
        h_k = g.half_width(k)
        check_stencil(h, k, -h_k + 1, h_k - 1)
        with pytest.raises(OutOfStencil):
            check_stencil(h, k, -h_k, h_k)


@given(st.integers(1, 5), st.integers(2, 12), st.integers(0, 2 ** 32 - 1), st.data())
def test_single_node_matches_layer_bitwise(m1, n, seed, data):
    g = build_grid(0.05, m1, n)
    h = random_history(g, seed)
    w = build_weights(n)
    k = data.draw(st.integers(1, n))
    hw = g.half_width(k) - 1
    l = data.draw(st.integers(-hw, hw))
    layer = eval_F_layer(h, w, k)
    assert eval_F(h, w, l, k) == layer[l + hw]


@given(st.integers(0, 2 ** 32 - 1), st.complex_numbers(max_magnitude=10), st.complex_numbers(max_magnitude=10))
def test_linearity(seed, a, b):
    g = build_grid(0.05, 3, 8)
    h1, h2 = random_history(g, seed), random_history(g, seed + 1)
    combo = StateHistory(g)
    for k in range(1, g.n + 1):
        combo.append(a * h1.v_layer(k) + b * h2.v_layer(k))
    w = build_weights(8)
    for k in (3, 7):
        lhs = eval_F_layer(combo, w, k)
        rhs = a * eval_F_layer(h1, w, k) + b * eval_F_layer(h2, w, k)
        scale = 1 + max(abs(a), abs(b)) * np.max(np.abs(eval_F_layer(h1, w, k)) + np.abs(eval_F_layer(h2, w, k)))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


def test_translation_equivariance():
    g = build_grid(0.05, 4, 8)
    f = lambda x, t: np.sin(3 * x + 0.2) * t * t + 1j * x ** 3 * t
    shifted = lambda x, t: f(x + g.dx, t)
    h, hs = sample_history(g, f), sample_history(g, shifted)
    w = build_weights(8)
    k = 5
    F, Fs = eval_F_layer(h, w, k), eval_F_layer(hs, w, k)
    # Fs at l equals F at l + 1
    np.testing.assert_allclose(Fs[:-1], F[1:], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("xi", [2.0, 4.0])
@pytest.mark.parametrize("q", [lambda t: t, lambda t: t * t], ids=["t", "t2"])
def test_plane_wave_error_shrinks_under_refinement(xi, q):
    errs = []
    for dx in (0.01, 0.005, 0.0025):
        n = int(round(0.1 / dx))
        g = build_grid(dx, 4, n)
        h = sample_history(g, lambda x, t: np.exp(1j * xi * x) * q(t))
        w = build_weights(n)
        x = g.layer_x(n)[1:-1]
        F = eval_F_layer(h, w, n)
        errs.append(np.max(np.abs(F - np.exp(1j * xi * x) * phi_plane_wave(xi, q, n * dx))))
    # observed ratios 1.5-1.7, creeping towards 2 as dx shrinks
    ratios = errs[0] / errs[1], errs[1] / errs[2]
    assert ratios[0] > 1.4 and ratios[1] > ratios[0]


def test_thread_count_does_not_change_F():
    g = build_grid(0.01, 20, 60)
    h = random_history(g, 5)
    w = build_weights(60)
    before = numba.get_num_threads()
    try:
        many = eval_F_layer(h, w, 59)
        numba.set_num_threads(1)
        one = eval_F_layer(h, w, 59)
    finally:
        numba.set_num_threads(before)
    assert many.tobytes() == one.tobytes()
