"""Reference implementations of the hot kernels in numpy / plain Python.

Selected at import time when the compiled extension is unavailable.  The
compiled module in _core.pyx mirrors these signatures exactly; the parity
test suite holds the two backends together.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

NAME = "python"


def escape_big(d: int) -> float:
    """Largest safe magnitude before the next d-th power can overflow."""
    return 10.0 ** (300.0 // d)


def green_point(d, cre, cim, zre, zim, budget, r_esc):
    """Green potential of z for z^d + c.

    Iterates past the escape radius until the magnitude is astronomically
    large, so log|z_n|/d^n has converged to roundoff.  Returns
    (g, iterations, escaped); g = 0.0 when the budget runs out below r_esc.
    """
    c = complex(cre, cim)
    z = complex(zre, zim)
    big = escape_big(d)
    n = 0
    while n < budget:
        az = abs(z)
        if az > big:
            return math.log(az) / d**n, n, True
        if not (az == az):  # NaN guard
            return 0.0, n, False
        z = z**d + c
        n += 1
    az = abs(z)
    if az > r_esc:
        # budget ran out mid-escape; the estimate is still usable
        return math.log(az) / d**n, n, True
    return 0.0, n, False


def green_many(d, c_arr, z_arr, budget, r_esc):
    """Vectorized green over matching arrays of parameters and seeds."""
    c = np.asarray(c_arr, dtype=np.complex128).ravel()
    z = np.asarray(z_arr, dtype=np.complex128).copy().ravel()
    big = escape_big(d)
    g = np.zeros(z.shape, dtype=np.float64)
    iters = np.zeros(z.shape, dtype=np.int64)
    escaped = np.zeros(z.shape, dtype=bool)
    active = np.ones(z.shape, dtype=bool)
    for n in range(budget):
        az = np.abs(z)
        done = active & (az > big)
        if done.any():
            g[done] = np.log(az[done]) / d**n
            iters[done] = n
            escaped[done] = True
            active &= ~done
        if not active.any():
            break
        za = z[active]
        z[active] = za**d + c[active]
    if active.any():
        az = np.abs(z[active])
        late = az > r_esc
        idx = np.flatnonzero(active)[late]
        g[idx] = np.log(az[late]) / d**budget
        iters[idx] = budget
        escaped[idx] = True
        iters[np.flatnonzero(active)[~late]] = budget
    return g, iters, escaped


def escape_grid(d, re0, im0, step, nx, ny, budget, r_esc):
    """Per-pixel parameter-plane green values on a row-major grid.

    Pixel (i, j) is c = (re0 + j*step) + (im0 + i*step) 1j; the iteration
    starts at the critical value z = c.  Returns a float64 (ny, nx) array,
    0 where undecided.
    """
    jj, ii = np.meshgrid(np.arange(nx), np.arange(ny))
    c = (re0 + jj * step) + 1j * (im0 + ii * step)
    g, _, _ = green_many(d, c, c.copy(), budget, r_esc)
    return g.reshape(ny, nx)


def newton_map_point(d, cre, cim, n, wre, wim, z0re, z0im, tol, maxit):
    """Newton solve f_c^n(z) = w for z, seeded at z0.

    Returns (z, ok, resid, steps).  Acceptance allows the conditioning
    floor ~ |(f^n)'| * ulp near the Julia set, where the residual cannot
    drop to tol * |w| no matter how exact z is.  ok=False on derivative
    blowup, overflow or non-convergence.
    """
    c = complex(cre, cim)
    w = complex(wre, wim)
    z = complex(z0re, z0im)
    scale = max(abs(w), 1.0)
    for it in range(maxit + 1):
        v = z
        dv = 1.0 + 0.0j
        bad = False
        for _ in range(n):
            dv = d * v ** (d - 1) * dv
            v = v**d + c
            if abs(v) > 1e200 or abs(dv) > 1e280:
                bad = True
                break
        if bad:
            return z, False, float("inf"), it
        r = abs(v - w)
        floor = 100.0 * 2.2e-16 * abs(dv) * (1.0 + abs(z))
        if r <= max(tol * scale, floor):
            return z, True, r, it
        if dv == 0 or it == maxit:
            return z, False, r, it
        step = (v - w) / dv
        z = z - step
        if abs(step) <= 1e-17 * max(abs(z), 1e-300):
            # converged in z; final pass re-checks the residual above
            continue
    return z, False, float("inf"), maxit


def _orbit_value(d, c, z, n):
    v = z
    for _ in range(n):
        v = v**d + c
        if abs(v) > 1e200:
            return v, False
    return v, True


def newton_param_point(d, n, wre, wim, c0re, c0im, tol, maxit):
    """Newton solve Phi_n(c) = w for c, where Phi_n(c) = f_c^n(c).

    The derivative d Phi_n / dc is accumulated by forward differentiation
    of the iteration (z -> z^d + c).  Phi_1(c) = c.  Acceptance includes
    the same conditioning floor as newton_map_point.
    """
    w = complex(wre, wim)
    c = complex(c0re, c0im)
    scale = max(abs(w), 1.0)
    for it in range(maxit + 1):
        z = c
        dz = 1.0 + 0.0j
        bad = False
        for _ in range(n - 1):
            dz = d * z ** (d - 1) * dz + 1.0
            z = z**d + c
            if abs(z) > 1e200 or abs(dz) > 1e280:
                bad = True
                break
        if bad:
            return c, False, float("inf"), it
        r = abs(z - w)
        floor = 100.0 * 2.2e-16 * abs(dz) * (1.0 + abs(c))
        if r <= max(tol * scale, floor):
            return c, True, r, it
        if dz == 0 or it == maxit:
            return c, False, r, it
        step = (z - w) / dz
        c = c - step
        if abs(step) <= 1e-17 * max(abs(c), 1e-300):
            continue
    return c, False, float("inf"), maxit


def pullback_polyline(d, cre, cim, pts, seed):
    """Continue the d-th root branch of (p - c) along a polyline.

    pts is a complex array tracing a path; seed picks the branch at pts[0].
    Returns (out, ok): out[i]^d + c == pts[i], with out[0] the root closest
    to seed, and each subsequent point the root closest to its predecessor.
    ok flips to False when consecutive roots are too ambiguous (path step
    comparable to the root spacing), signalling the caller to subdivide.
    """
    c = complex(cre, cim)
    p = np.asarray(pts, dtype=np.complex128)
    out = np.empty_like(p)
    ok = True
    phases = np.exp(2j * np.pi * np.arange(d) / d)
    prev = complex(seed)
    for i, y in enumerate(p):
        u = y - c
        r = abs(u) ** (1.0 / d)
        base = cmath.exp(1j * cmath.phase(u) / d) * r if r > 0 else 0.0
        cands = base * phases
        dist = np.abs(cands - prev)
        j = int(np.argmin(dist))
        second = np.partition(dist, 1)[1] if d > 1 else float("inf")
        if i > 0 and dist[j] > 0.45 * second:
            ok = False
        prev = cands[j]
        out[i] = prev
    return out, ok


def real_orbit(d, c, n):
    """Orbit x_0 = 0, x_{k+1} = x_k^d + c, clipped at +-1e150; float64 array
    of length n+1."""
    out = np.empty(n + 1, dtype=np.float64)
    x = 0.0
    out[0] = x
    for k in range(1, n + 1):
        x = x**d + c
        if x > 1e150 or x < -1e150:
            out[k:] = x
            return out
        out[k] = x
    return out


def ce_log_derivatives(d, c, n):
    """Cumulative log|Df^k(c)| along the critical value orbit, k = 1..n.

    Df^k(c) = prod_{i=0}^{k-1} d * x_i^(d-1) with x_0 = c.  Returns (sums,
    hit_zero) where hit_zero marks an exact critical hit (superattracting).
    """
    sums = np.empty(n, dtype=np.float64)
    x = float(c)
    acc = 0.0
    for k in range(n):
        if x == 0.0:
            sums[k:] = -np.inf
            return sums, True
        acc += math.log(abs(d * x ** (d - 1)))
        sums[k] = acc
        x = x**d + c
        if abs(x) > 1e150:
            x = math.copysign(1e150, x)
    return sums, False


def sor_solve(u, mask, omega, tol, max_sweeps):
    """Red-black SOR for the masked Laplace problem, in place.

    u holds boundary values outside the mask; cells where mask is True are
    relaxed.  Returns (sweeps, max_residual).  Deterministic: fixed
    checkerboard ordering.
    """
    ny, nx = u.shape
    ii, jj = np.meshgrid(np.arange(ny), np.arange(nx), indexing="ij")
    inner = mask[1:-1, 1:-1]
    red = ((ii + jj) % 2 == 0)[1:-1, 1:-1] & inner
    black = ((ii + jj) % 2 == 1)[1:-1, 1:-1] & inner
    res = np.inf
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        for par in (red, black):
            nb = (
                u[:-2, 1:-1] + u[2:, 1:-1] + u[1:-1, :-2] + u[1:-1, 2:]
            )
            delta = 0.25 * nb - u[1:-1, 1:-1]
            u[1:-1, 1:-1][par] += omega * delta[par]
        nb = u[:-2, 1:-1] + u[2:, 1:-1] + u[1:-1, :-2] + u[1:-1, 2:]
        resid = np.abs(0.25 * nb - u[1:-1, 1:-1])[inner]
        res = float(resid.max()) if resid.size else 0.0
        if res < tol:
            break
    return sweeps, res


def dirichlet_energy(u, region):
    """Discrete energy sum of (du)^2 over grid edges with both ends in the
    region (grid spacing cancels in 2-D)."""
    r = region
    ex = (r[:, :-1] & r[:, 1:])
    ey = (r[:-1, :] & r[1:, :])
    dx = (u[:, 1:] - u[:, :-1])[ex]
    dy = (u[1:, :] - u[:-1, :])[ey]
    return float(np.sum(dx * dx) + np.sum(dy * dy))
