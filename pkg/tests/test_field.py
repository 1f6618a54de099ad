import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from flrw_blowup.background import BackgroundModel
from flrw_blowup.field import (FieldState, Grid, bump_profile, bump_state, energy, inner, laplacian,
                               nehari, norms, sphere_area, write_snapshot)
from flrw_blowup.nonlinearity import Nonlinearity

MINK3 = BackgroundModel.minkowski(3, 1.0)
CUBIC = Nonlinearity("focusing", 3, epsilon=2)


def state(grid, u, v=None):
    return FieldState(grid, 0.0, u, np.zeros_like(u) if v is None else v)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid("line", 2, 1.0, 64)
    with pytest.raises(ValueError):
        Grid("radial", 1, 1.0, 64)
    with pytest.raises(ValueError):
        Grid("line", 1, 1.0, 8)
    with pytest.raises(ValueError):
        Grid("radial", 3, -1.0, 64)
    assert Grid("RadialND", 3, 1.0, 64).geometry == "radial"
    assert Grid("Line1D", 1, 1.0, 64).dx == pytest.approx(2.0 / 64)
    assert Grid("radial", 3, 1.0, 64).dx == pytest.approx(1.0 / 64)


def test_sphere_area():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


def test_laplacian_exact_on_low_order_polynomials():
    g = Grid("line", 1, 1.3, 40)
    assert np.all(laplacian(state(g, np.full(g.size, 3.7)))[1:-1] == 0)
    assert laplacian(state(g, g.nodes ** 2))[1:-1] == pytest.approx(np.full(g.size - 2, 2.0), rel=1e-11)
    for n in (2, 3, 5):
        r = Grid("radial", n, 1.0, 50)
        lap = laplacian(state(r, r.nodes ** 2))
        # every node off the outer boundary, the origin included
        assert lap[:-1] == pytest.approx(np.full(r.size - 1, 2.0 * n), rel=1e-10)


def test_radial_origin_stencil():
    g = Grid("radial", 3, 1.0, 32)
    u = np.cos(g.nodes)
    assert laplacian(state(g, u))[0] == pytest.approx(2 * 3 * (u[1] - u[0]) / g.dx ** 2, rel=1e-12)


def test_inner_examples():
    line = Grid("line", 1, 1.0, 64)
    assert inner(np.zeros(line.size), np.zeros(line.size), line) == 0.0
    assert inner(np.ones(line.size), np.ones(line.size), line) == pytest.approx(2.0, rel=1e-12)
    ball = Grid("radial", 3, 1.0, 256)
    assert inner(np.ones(ball.size), np.ones(ball.size), ball) == pytest.approx(4 * math.pi / 3, rel=1e-12)
    with pytest.raises(ValueError):
        inner(np.ones(3), np.ones(ball.size), ball)


def test_norm_examples():
    g = Grid("line", 1, 2.0, 512)
    assert norms(state(g, np.zeros(g.size))) == (0.0, 0.0, 0.0)
    u = np.sin(math.pi * g.nodes / g.radius)
    l2, _, grad = norms(state(g, u))
    assert l2 ** 2 == pytest.approx(g.radius, rel=1e-4)
    assert grad ** 2 == pytest.approx(math.pi ** 2 / g.radius, rel=1e-4)
    l2b, _, gradb = norms(state(g, 2 * u))
    assert l2b == pytest.approx(2 * l2, rel=1e-15) and gradb == pytest.approx(2 * grad, rel=1e-15)


def test_quadrature_converges_at_second_order():
    errs = []
    for N in (64, 128, 256):
        g = Grid("line", 1, 1.0, N)
        u = np.cos(0.5 * math.pi * g.nodes)
        errs.append(abs(norms(state(g, u))[2] ** 2 - math.pi ** 2 / 4))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.05)


@pytest.mark.parametrize("grid", [Grid("line", 1, 1.0, 80), Grid("radial", 3, 1.0, 80),
                                  Grid("radial", 2, 1.5, 64), Grid("periodic", 1, 1.0, 64)])
def test_summation_by_parts(grid):
    rng = np.random.default_rng(0)
    u, w = rng.normal(size=grid.size), rng.normal(size=grid.size)
    grid.zero_boundary(u)
    grid.zero_boundary(w)
    assert abs(grid.inner(grid.laplacian(u), w) - grid.inner(u, grid.laplacian(w))) <= 1e-10 * grid.size ** 2
    assert grid.inner(grid.laplacian(u), u) == pytest.approx(-grid.grad_norm_sq(u), rel=1e-10)


def test_self_adjoint_on_smooth_compact_profiles():
    g = Grid("radial", 3, 1.5, 512)
    u, w = bump_profile(g, 1.0), bump_profile(g, 0.7)
    assert abs(g.inner(g.laplacian(u), w) - g.inner(u, g.laplacian(w))) <= 1e-10


def test_energy_zero_state():
    g = Grid("radial", 3, 1.0, 64)
    z = state(g, np.zeros(g.size))
    assert energy(z, MINK3, CUBIC) == 0.0
    assert nehari(z, MINK3, CUBIC) == 0.0


def test_energy_of_linear_standing_mode():
    L2 = 2.0  # interval length
    g = Grid("line", 1, L2 / 2, 1024)
    bg = BackgroundModel.minkowski(1, 1.3)
    u = np.sin(math.pi * (g.nodes + g.radius) / L2)
    omega2 = (math.pi / L2) ** 2 + 1.3 ** 2
    assert energy(state(g, u), bg, Nonlinearity("zero")) == pytest.approx(omega2 * L2 / 4, rel=1e-5)


def _continuum_bump_moments(n, rho):
    area = sphere_area(n)
    w = lambda r: (1 - (r / rho) ** 2) ** 4
    dw = lambda r: -8 * r / rho ** 2 * (1 - (r / rho) ** 2) ** 3
    W2 = area * quad(lambda r: w(r) ** 2 * r ** (n - 1), 0, rho, epsrel=1e-13)[0]
    G = area * quad(lambda r: dw(r) ** 2 * r ** (n - 1), 0, rho, epsrel=1e-13)[0]
    W4 = area * quad(lambda r: w(r) ** 4 * r ** (n - 1), 0, rho, epsrel=1e-13)[0]
    return W2, G, W4


def test_energy_sign_flip_matches_quadrature_oracle():
    W2, G, W4 = _continuum_bump_moments(3, 1.0)
    # E(lam) = lam^2 (W2 + G)/2 - lam^4 W4/4 vanishes at lam^2 = 2 (W2 + G) / W4
    lam_star = math.sqrt(2 * (W2 + G) / W4)
    g = Grid("radial", 3, 1.5, 2048)
    lam = brentq(lambda A: energy(bump_state(g, A, 0.0, 1.0), MINK3, CUBIC), 1.0, 100.0, xtol=1e-12)
    assert lam == pytest.approx(lam_star, rel=1e-4)
    assert energy(bump_state(g, 0.5 * lam, 0, 1.0), MINK3, CUBIC) > 0
    assert energy(bump_state(g, 2 * lam, 0, 1.0), MINK3, CUBIC) < 0


def test_nehari_crossover_matches_quadrature_oracle():
    W2, G, W4 = _continuum_bump_moments(3, 1.0)
    lam_star = math.sqrt((W2 + G) / W4)
    g = Grid("radial", 3, 1.5, 2048)
    lam = brentq(lambda A: nehari(bump_state(g, A, 0.0, 1.0), MINK3, CUBIC), 1.0, 100.0, xtol=1e-12)
    assert lam == pytest.approx(lam_star, rel=1e-4)
    assert nehari(bump_state(g, 0.5 * lam, 0, 1.0), MINK3, CUBIC) > 0
    assert nehari(bump_state(g, 2 * lam, 0, 1.0), MINK3, CUBIC) < 0


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0])
def test_nehari_cross_term_difference(m):
    g = Grid("radial", 3, 1.5, 256)
    s = bump_state(g, 2.0, 2.0, 1.0, t=0.3)
    H = 0.05
    diff = nehari(s, BackgroundModel.de_sitter(3, m, H), CUBIC) - nehari(s, BackgroundModel.minkowski(3, m), CUBIC)
    # the de Sitter gradient weight a^-2 differs from 1; remove it by hand
    grad = g.grad_norm_sq(s.u) * (math.exp(-2 * H * 0.3) - 1)
    assert diff - grad == pytest.approx(3 * H * min(1, m) ** 2 * g.inner(s.u, s.u), rel=1e-12)


@settings(max_examples=30)
@given(A=st.floats(0.1, 10), B=st.floats(-10, 10), c=st.floats(0.1, 4))
def test_energy_quadratic_part_scales(A, B, c):
    g = Grid("radial", 3, 1.5, 64)
    s = bump_state(g, A, B, 1.0)
    lin = Nonlinearity("zero")
    assert energy(s.scaled(c), MINK3, lin) == pytest.approx(c * c * energy(s, MINK3, lin), rel=1e-12)


def test_bump_state_support_and_boundary():
    g = Grid("radial", 3, 1.5, 300)
    s = bump_state(g, 2.0, 3.0, 1.0)
    assert s.u[0] == 2.0 and s.v[0] == 3.0
    assert np.all(s.u[g.nodes >= 1.0] == 0)
    assert s.u[-1] == 0 and s.v[-1] == 0


def test_field_state_shape_check():
    g = Grid("line", 1, 1.0, 32)
    with pytest.raises(ValueError):
        FieldState(g, 0.0, np.zeros(5), np.zeros(5))
    s = state(g, np.ones(g.size))
    assert s.alive
    s.u[3] = np.nan
    assert not s.alive


def test_write_snapshot(tmp_path):
    g = Grid("line", 1, 1.0, 16)
    s = bump_state(g, 1.0, 2.0, 0.5)
    p = tmp_path / "snap.csv"
    write_snapshot(s, p)
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["node_coordinate", "u", "v"]
    assert len(rows) == g.size + 1
    assert float(rows[9][1]) == s.u[8]
