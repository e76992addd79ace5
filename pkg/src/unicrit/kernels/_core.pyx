# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: escape iteration, Newton steps for ray tracing,
root-branch continuation, real orbits and SOR relaxation.

Signature-compatible with kernels._fallback; see that module for contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, hypot, log, pow, sin

cnp.import_array()

NAME = "cython"

cdef double BIG_CLIP = 1e150


cdef inline double complex cpow_int(double complex z, int d) nogil:
    cdef double complex r = z
    cdef int k
    for k in range(d - 1):
        r = r * z
    return r


def escape_big(int d):
    return 10.0 ** (300.0 // d)


def green_point(int d, double cre, double cim, double zre, double zim,
                long budget, double r_esc):
    cdef double complex c = cre + 1j * cim
    cdef double complex z = zre + 1j * zim
    cdef double big = 10.0 ** (300.0 // d)
    cdef long n = 0
    cdef double az
    while n < budget:
        az = hypot(z.real, z.imag)
        if az > big:
            return log(az) / pow(d, n), n, True
        if az != az:
            return 0.0, n, False
        z = cpow_int(z, d) + c
        n += 1
    az = hypot(z.real, z.imag)
    if az > r_esc:
        return log(az) / pow(d, n), n, True
    return 0.0, n, False


def green_many(int d, c_arr, z_arr, long budget, double r_esc):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c = \
        np.ascontiguousarray(np.asarray(c_arr, dtype=np.complex128).ravel())
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] z = \
        np.ascontiguousarray(np.asarray(z_arr, dtype=np.complex128).ravel()).copy()
    cdef Py_ssize_t m = z.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] iters = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] esc = np.zeros(m, dtype=np.uint8)
    cdef double big = 10.0 ** (300.0 // d)
    cdef Py_ssize_t i
    cdef long n
    cdef double az
    cdef double complex zz, cc
    with nogil:
        for i in range(m):
            zz = z[i]
            cc = c[i]
            n = 0
            while n < budget:
                az = hypot(zz.real, zz.imag)
                if az > big:
                    g[i] = log(az) / pow(d, n)
                    iters[i] = n
                    esc[i] = 1
                    break
                if az != az:
                    break
                zz = cpow_int(zz, d) + cc
                n += 1
            else:
                az = hypot(zz.real, zz.imag)
                iters[i] = budget
                if az > r_esc:
                    g[i] = log(az) / pow(d, budget)
                    esc[i] = 1
    return g, iters, esc.astype(bool)


def escape_grid(int d, double re0, double im0, double step, int nx, int ny,
                long budget, double r_esc):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] g = np.zeros((ny, nx), dtype=np.float64)
    cdef double big = 10.0 ** (300.0 // d)
    cdef int i, j
    cdef long n
    cdef double az
    cdef double complex zz, cc
    with nogil:
        for i in range(ny):
            for j in range(nx):
                cc = (re0 + j * step) + 1j * (im0 + i * step)
                zz = cc
                n = 0
                while n < budget:
                    az = hypot(zz.real, zz.imag)
                    if az > big:
                        g[i, j] = log(az) / pow(d, n)
                        break
                    zz = cpow_int(zz, d) + cc
                    n += 1
                else:
                    az = hypot(zz.real, zz.imag)
                    if az > r_esc:
                        g[i, j] = log(az) / pow(d, budget)
    return g


def newton_map_point(int d, double cre, double cim, int n, double wre,
                     double wim, double z0re, double z0im, double tol,
                     int maxit):
    cdef double complex c = cre + 1j * cim
    cdef double complex w = wre + 1j * wim
    cdef double complex z = z0re + 1j * z0im
    cdef double complex v, dv, stp
    cdef double scale = max(hypot(wre, wim), 1.0)
    cdef double r, floor_
    cdef int it, k
    cdef bint bad
    for it in range(maxit + 1):
        v = z
        dv = 1.0
        bad = 0
        for k in range(n):
            dv = d * cpow_int(v, d - 1) * dv
            v = cpow_int(v, d) + c
            if hypot(v.real, v.imag) > 1e200 or hypot(dv.real, dv.imag) > 1e280:
                bad = 1
                break
        if bad:
            return z, False, float("inf"), it
        r = hypot(v.real - w.real, v.imag - w.imag)
        floor_ = 100.0 * 2.2e-16 * hypot(dv.real, dv.imag) * (1.0 + hypot(z.real, z.imag))
        if r <= max(tol * scale, floor_):
            return z, True, r, it
        if dv == 0 or it == maxit:
            return z, False, r, it
        stp = (v - w) / dv
        z = z - stp
    return z, False, float("inf"), maxit


def newton_param_point(int d, int n, double wre, double wim, double c0re,
                       double c0im, double tol, int maxit):
    cdef double complex w = wre + 1j * wim
    cdef double complex c = c0re + 1j * c0im
    cdef double complex z, dz, stp
    cdef double scale = max(hypot(wre, wim), 1.0)
    cdef double r, floor_
    cdef int it, k
    cdef bint bad
    for it in range(maxit + 1):
        z = c
        dz = 1.0
        bad = 0
        for k in range(n - 1):
            dz = d * cpow_int(z, d - 1) * dz + 1.0
            z = cpow_int(z, d) + c
            if hypot(z.real, z.imag) > 1e200 or hypot(dz.real, dz.imag) > 1e280:
                bad = 1
                break
        if bad:
            return c, False, float("inf"), it
        r = hypot(z.real - w.real, z.imag - w.imag)
        floor_ = 100.0 * 2.2e-16 * hypot(dz.real, dz.imag) * (1.0 + hypot(c.real, c.imag))
        if r <= max(tol * scale, floor_):
            return c, True, r, it
        if dz == 0 or it == maxit:
            return c, False, r, it
        stp = (z - w) / dz
        c = c - stp
    return c, False, float("inf"), maxit


def pullback_polyline(int d, double cre, double cim, pts, seed):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] p = \
        np.ascontiguousarray(np.asarray(pts, dtype=np.complex128))
    cdef Py_ssize_t m = p.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(m, dtype=np.complex128)
    cdef double complex c = cre + 1j * cim
    cdef double complex prev = seed
    cdef double complex u, base, cand, best_c
    cdef double r, ang, dist, best, second
    cdef Py_ssize_t i
    cdef int k
    cdef bint ok = 1
    for i in range(m):
        u = p[i] - c
        r = hypot(u.real, u.imag)
        ang = atan2(u.imag, u.real)
        r = pow(r, 1.0 / d)
        best = 1e308
        second = 1e308
        best_c = 0
        for k in range(d):
            cand = r * (cos((ang + 6.283185307179586 * k) / d)
                        + 1j * sin((ang + 6.283185307179586 * k) / d))
            dist = hypot(cand.real - prev.real, cand.imag - prev.imag)
            if dist < best:
                second = best
                best = dist
                best_c = cand
            elif dist < second:
                second = dist
        if i > 0 and best > 0.45 * second:
            ok = 0
        prev = best_c
        out[i] = prev
    return out, bool(ok)


def real_orbit(int d, double c, long n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n + 1, dtype=np.float64)
    cdef double x = 0.0
    cdef long k
    out[0] = 0.0
    for k in range(1, n + 1):
        x = pow(x, d) + c
        if x > BIG_CLIP or x < -BIG_CLIP:
            out[k:] = x
            return out
        out[k] = x
    return out


def ce_log_derivatives(int d, double c, long n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.empty(n, dtype=np.float64)
    cdef double x = c
    cdef double acc = 0.0
    cdef long k
    for k in range(n):
        if x == 0.0:
            sums[k:] = -np.inf
            return sums, True
        acc += log(fabs(d * pow(x, d - 1)))
        sums[k] = acc
        x = pow(x, d) + c
        if fabs(x) > BIG_CLIP:
            x = BIG_CLIP if x > 0 else -BIG_CLIP
    return sums, False


def sor_solve(cnp.ndarray[cnp.float64_t, ndim=2] u,
              cnp.ndarray[cnp.uint8_t, ndim=2, cast=True] mask,
              double omega, double tol, long max_sweeps):
    cdef Py_ssize_t ny = u.shape[0]
    cdef Py_ssize_t nx = u.shape[1]
    cdef long sweep
    cdef Py_ssize_t i, j
    cdef int par
    cdef double res, delta
    res = 1e308
    for sweep in range(1, max_sweeps + 1):
        for par in range(2):
            with nogil:
                for i in range(1, ny - 1):
                    for j in range(1 + ((i + par + 1) % 2), nx - 1, 2):
                        if mask[i, j]:
                            delta = 0.25 * (u[i - 1, j] + u[i + 1, j]
                                            + u[i, j - 1] + u[i, j + 1]) - u[i, j]
                            u[i, j] += omega * delta
        res = 0.0
        with nogil:
            for i in range(1, ny - 1):
                for j in range(1, nx - 1):
                    if mask[i, j]:
                        delta = fabs(0.25 * (u[i - 1, j] + u[i + 1, j]
                                             + u[i, j - 1] + u[i, j + 1]) - u[i, j])
                        if delta > res:
                            res = delta
        if res < tol:
            return sweep, res
    return max_sweeps, res


def dirichlet_energy(cnp.ndarray[cnp.float64_t, ndim=2] u,
                     cnp.ndarray[cnp.uint8_t, ndim=2, cast=True] region):
    cdef Py_ssize_t ny = u.shape[0]
    cdef Py_ssize_t nx = u.shape[1]
    cdef Py_ssize_t i, j
    cdef double e = 0.0, dv
    with nogil:
        for i in range(ny):
            for j in range(nx - 1):
                if region[i, j] and region[i, j + 1]:
                    dv = u[i, j + 1] - u[i, j]
                    e += dv * dv
        for i in range(ny - 1):
            for j in range(nx):
                if region[i, j] and region[i + 1, j]:
                    dv = u[i + 1, j] - u[i, j]
                    e += dv * dv
    return e
