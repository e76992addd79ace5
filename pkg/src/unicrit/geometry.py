"""Planar machinery behind the puzzle: closed contours, winding tests,
analytic pullback of contours through z -> z^d + c, and reading off the
external angle of a point by flowing up the Green gradient.

Contours are complex numpy arrays, closed implicitly (last vertex joins the
first), oriented counterclockwise around their interior.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import kernels
from .angles import ExternalAngle
from .bottcher import (
    MapParams,
    NEWTON_MAXIT,
    NEWTON_TOL,
    _ray_target,
    bottcher_far,
    trace_dynamical_ray,
    work_band,
)


class PullbackError(RuntimeError):
    pass


def winding_number(loop: np.ndarray, p: complex) -> float:
    """Total turning of loop around p, in turns; loop closed implicitly."""
    v = loop - p
    rot = v[1:] / v[:-1]
    ang = float(np.angle(rot).sum() + np.angle(v[0] / v[-1]))
    return ang / (2 * math.pi)


def contains(loop: np.ndarray, p: complex) -> bool:
    return abs(winding_number(loop, p)) > 0.5


def point_loop_distance(loop: np.ndarray, p: complex) -> float:
    """Distance from p to the closed polyline."""
    a = loop
    b = np.roll(loop, -1)
    ab = b - a
    ap = p - a
    denom = np.abs(ab) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.clip((ap * ab.conjugate()).real / np.where(denom == 0, 1, denom), 0, 1)
    proj = a + t * ab
    return float(np.abs(p - proj).min())


def resample_double(loop: np.ndarray) -> np.ndarray:
    """Insert midpoints on every edge (linear; used to help root tracking)."""
    nxt = np.roll(loop, -1)
    mid = 0.5 * (loop + nxt)
    out = np.empty(2 * len(loop), dtype=complex)
    out[0::2] = loop
    out[1::2] = mid
    return out


def _continue_roots(m: MapParams, pts: np.ndarray, seed: complex):
    out, ok = kernels.pullback_polyline(m.d, m.c.real, m.c.imag, pts, seed)
    return np.asarray(out), ok


def _pull_once_around(m: MapParams, loop: np.ndarray, seed: complex):
    """Continue the root branch along the closed loop; returns (points along
    one circuit, root after returning to loop[0])."""
    pts = np.append(loop, loop[0])
    out, ok = _continue_roots(m, pts, seed)
    if not ok:
        raise PullbackError("ambiguous root continuation")
    return out[:-1], out[-1]


def d_th_roots(m: MapParams, y: complex) -> list[complex]:
    u = y - m.c
    if u == 0:
        return [0.0j] * m.d
    r = abs(u) ** (1.0 / m.d)
    ph = cmath.phase(u)
    return [r * cmath.exp(1j * (ph + 2 * math.pi * k) / m.d) for k in range(m.d)]


def pullback_contour(
    m: MapParams,
    loop: np.ndarray,
    inside_preimage: complex,
    max_refine: int = 4,
) -> tuple[np.ndarray, bool]:
    """Pull a closed contour back through f and keep the component whose
    interior contains inside_preimage.

    Returns (contour, critical): critical is True when the input surrounds
    the critical value, in which case the preimage is a single loop covering
    the input d times and automatically contains 0.
    """
    w_c = winding_number(loop, m.c)
    critical = abs(w_c) > 0.5
    cur = loop
    for attempt in range(max_refine + 1):
        try:
            return _pullback_attempt(m, cur, inside_preimage, critical), critical
        except PullbackError:
            if attempt == max_refine:
                raise
            cur = resample_double(cur)
    raise PullbackError("unreachable")


def _pullback_attempt(m, loop, inside_preimage, critical):
    roots0 = d_th_roots(m, loop[0])
    if critical:
        seed = roots0[0]
        sheets = []
        for _ in range(m.d):
            sheet, seed = _pull_once_around(m, loop, seed)
            sheets.append(sheet)
        if abs(seed - roots0[0]) > 1e-6 * max(1.0, abs(seed)):
            raise PullbackError("monodromy did not close after d circuits")
        out = np.concatenate(sheets)
        if abs(winding_number(out, inside_preimage) - 1) > 0.4:
            raise PullbackError("preimage point not inside critical pullback")
        return out
    tried = []
    for seed in roots0:
        if any(abs(seed - t) < 1e-12 * max(1.0, abs(seed)) for t in tried):
            continue
        sheet, end = _pull_once_around(m, loop, seed)
        tried.append(sheet[0])
        if abs(end - sheet[0]) > 1e-6 * max(1.0, abs(end)):
            raise PullbackError("branch did not close on a non-critical loop")
        if abs(winding_number(sheet, inside_preimage) - 1) < 0.4:
            return sheet
    raise PullbackError("no preimage component contains the seed point")


def log_derivative_B(m: MapParams, z: complex) -> complex:
    """B'(z)/B(z), via the stable ratio recurrence u_{n+1} = u_n z_n^d / z_{n+1}."""
    u = 1.0 / z
    zk = complex(z)
    for _ in range(200):
        zn = zk**m.d + m.c
        u_next = u * zk**m.d / zn
        if abs(zk) > 1e60:
            return u_next
        if abs(u_next - u) <= 1e-16 * abs(u_next):
            return u_next
        u = u_next
        zk = zn
    return u


def flow_to_far(m: MapParams, z: complex, g_start: float) -> complex:
    """Integrate the Green gradient flow dz/dg = B/B' from potential g_start
    up into the working band; the external angle is constant along the flow."""
    g = g_start
    g_end = work_band(m) * 1.05
    zc = complex(z)
    guard = 0
    while g < g_end:
        h = min(0.25 * g, g_end - g)
        # RK4 on dz/dg = 1/u(z)
        k1 = 1.0 / log_derivative_B(m, zc)
        k2 = 1.0 / log_derivative_B(m, zc + 0.5 * h * k1)
        k3 = 1.0 / log_derivative_B(m, zc + 0.5 * h * k2)
        k4 = 1.0 / log_derivative_B(m, zc + h * k3)
        zc = zc + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        g += h
        guard += 1
        if guard > 4000:
            raise RuntimeError("gradient flow did not reach the far field")
    return zc


def angle_of_point(m: MapParams, z: complex, g: float) -> float:
    """Float external angle in [0,1) of a point at known potential g,
    anchored in the far field."""
    far = flow_to_far(m, z, g)
    b = bottcher_far(m, far)
    return (cmath.phase(b) / (2 * math.pi)) % 1.0


def equipotential_arc(
    m: MapParams,
    th_a: ExternalAngle,
    th_b: ExternalAngle,
    g: float,
    seed: complex,
    pts_per_turn: int = 512,
) -> np.ndarray:
    """Arc of the equipotential {G=g} swept ccw from angle th_a to th_b,
    Newton-continued from `seed` (a point at (th_a, g))."""
    width = (th_b.as_fraction() - th_a.as_fraction()) % 1
    if width == 0:
        width = 1
    n_pts = max(8, int(math.ceil(pts_per_turn * float(width))))
    out = [complex(seed)]
    prev = complex(seed)
    k = 1
    step = width / n_pts
    while k <= n_pts:
        frac = th_a.as_fraction() + k * step
        theta = ExternalAngle(frac.numerator, frac.denominator)
        n, w = _ray_target(m, theta, g)
        z, ok, _res, _ = kernels.newton_map_point(
            m.d, m.c.real, m.c.imag, n, w.real, w.imag,
            prev.real, prev.imag, NEWTON_TOL, NEWTON_MAXIT,
        )
        if not ok or abs(z - prev) > 0.5 * (1 + abs(prev)):
            # refine the angular step locally
            if n_pts > 65536:
                raise PullbackError(f"equipotential arc stalled near angle {theta}")
            n_pts *= 2
            step = width / n_pts
            k = 2 * k - 1
            continue
        out.append(z)
        prev = z
        k += 1
    return np.array(out, dtype=complex)


def ray_segment(curve, g_top: float, g_bot: float) -> np.ndarray:
    """Vertices of a traced ray with potentials in [g_bot, g_top], ordered
    top-down."""
    pts = [z for z, g in curve.points if g_bot - 1e-15 <= g <= g_top + 1e-15]
    return np.array(pts, dtype=complex)


def loop_area(loop: np.ndarray) -> float:
    """Signed area (shoelace); positive for ccw loops."""
    x, y = loop.real, loop.imag
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return float(0.5 * np.sum(x * yn - xn * y))


def ensure_ccw(loop: np.ndarray) -> np.ndarray:
    return loop if loop_area(loop) >= 0 else loop[::-1]
