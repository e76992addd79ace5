"""Backend parity: the compiled kernels must agree with the numpy fallback."""

import numpy as np
import pytest

from unicrit.kernels import _fallback

try:
    from unicrit.kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernels not built")

BACKENDS = [_fallback] + ([_core] if _core is not None else [])


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.NAME)
def test_green_point_basics(k):
    g, n, esc = k.green_point(2, 0.0, 0.0, np.e, 0.0, 200, 12.0)
    assert esc and abs(g - 1.0) < 1e-9
    g, n, esc = k.green_point(2, 0.0, 0.0, 0.5, 0.0, 200, 12.0)
    assert not esc and g == 0.0
    g, n, esc = k.green_point(3, 0.0, 0.0, np.e**2, 0.0, 200, 12.0)
    assert esc and abs(g - 2.0) < 1e-9


@needs_core
def test_green_many_parity():
    rng = np.random.default_rng(7)
    c = rng.uniform(-2, 1, 64) + 1j * rng.uniform(-1.5, 1.5, 64)
    g1, n1, e1 = _fallback.green_many(2, c, c, 300, 12.0)
    g2, n2, e2 = _core.green_many(2, c, c, 300, 12.0)
    assert np.array_equal(e1, e2)
    assert np.allclose(g1, g2, rtol=0, atol=1e-14)


@needs_core
def test_escape_grid_parity():
    g1 = _fallback.escape_grid(2, -2.1, -1.2, 0.05, 54, 48, 150, 12.0)
    g2 = _core.escape_grid(2, -2.1, -1.2, 0.05, 54, 48, 150, 12.0)
    assert np.allclose(g1, g2, rtol=0, atol=1e-14)
    assert (g1 > 0).any() and (g1 == 0).any()


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.NAME)
def test_newton_map_point(k):
    # solve z^2 = 4 from a nearby seed (c=0, one iterate)
    z, ok, r, _ = k.newton_map_point(2, 0.0, 0.0, 1, 4.0, 0.0, 1.9, 0.1, 1e-13, 50)
    assert ok and abs(z - 2.0) < 1e-10


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.NAME)
def test_newton_param_point(k):
    # Phi_2(c) = c^2 + c = 6 has root c = 2
    c, ok, r, _ = k.newton_param_point(2, 2, 6.0, 0.0, 1.8, 0.2, 1e-13, 50)
    assert ok and abs(c - 2.0) < 1e-10


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.NAME)
def test_pullback_polyline_tracks_branch(k):
    # path along circle |y|=4 with c=0: roots of y stay on continuous sqrt branch
    t = np.linspace(0, np.pi, 200)
    pts = 4.0 * np.exp(1j * t)
    out, ok = k.pullback_polyline(2, 0.0, 0.0, pts, 2.0 + 0.0j)
    assert ok
    assert np.allclose(out, 2.0 * np.exp(1j * t / 2), atol=1e-12)


@needs_core
def test_real_orbit_parity():
    o1 = _fallback.real_orbit(2, -1.7548776662466927, 500)
    o2 = _core.real_orbit(2, -1.7548776662466927, 500)
    assert np.array_equal(o1, o2)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.NAME)
def test_ce_log_derivatives(k):
    sums, zero = k.ce_log_derivatives(2, -2.0, 20)
    assert not zero
    # orbit -2 -> 2 -> 2 ...: |Df^n(-2)| = 4^n exactly
    assert abs(sums[19] / 20 - np.log(4)) < 1e-12
    sums, zero = k.ce_log_derivatives(2, 0.0, 5)
    assert zero


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.NAME)
def test_sor_round_annulus(k):
    # radial Laplace solution on a square grid, annulus 10 <= r <= 40 cells
    n = 101
    y, x = np.mgrid[0:n, 0:n] - (n - 1) / 2.0
    r = np.hypot(x, y)
    inner, outer = 12.0, 45.0
    u = np.where(r <= inner, 0.0, 1.0)
    mask = (r > inner) & (r < outer)
    u[r >= outer] = 1.0
    sweeps, res = k.sor_solve(u, mask, 1.9, 1e-10, 20000)
    assert res < 1e-10
    region = r < outer + 1.5
    e = k.dirichlet_energy(u, region)
    mod = 1.0 / e
    expect = np.log(outer / inner) / (2 * np.pi)
    assert abs(mod - expect) / expect < 0.05


@needs_core
def test_sor_parity_bitwise():
    n = 41
    y, x = np.mgrid[0:n, 0:n] - (n - 1) / 2.0
    r = np.hypot(x, y)
    u1 = np.where(r <= 6, 0.0, 1.0)
    u1[r >= 18] = 1.0
    mask = (r > 6) & (r < 18)
    u2 = u1.copy()
    s1, r1 = _fallback.sor_solve(u1, mask, 1.8, 1e-12, 5000)
    s2, r2 = _core.sor_solve(u2, mask, 1.8, 1e-12, 5000)
    assert s1 == s2
    assert np.array_equal(u1, u2)
