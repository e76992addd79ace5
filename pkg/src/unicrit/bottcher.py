"""Green functions, Böttcher coordinates and external-ray tracing for
z -> z^d + c, in both dynamical and parameter planes.

Conventions: potentials are natural-log Green values.  A point at potential
g on the ray of angle theta satisfies B_c(z) = exp(g + 2*pi*i*theta).
Tracing works by Newton continuation on iterated equations f^n(z) = w, with
w produced by inverting the Böttcher coordinate in the far field where its
product expansion is unconditionally safe.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .angles import ExternalAngle, RotationCycle, multiply_by_d

XI_DEFAULT = 1.0
GREEN_BUDGET = 4096
NEWTON_TOL = 1e-13
NEWTON_MAXIT = 60
STEP_FLOOR_FACTOR = 2.0**-20
STEP_RATIO_CAP = 1.6  # extra geometric refinement of the potential march


class DomainError(ValueError):
    """Query point below the critical potential (outside Delta_c)."""


class BranchAmbiguityError(ArithmeticError):
    """Böttcher product hit a factor too large for safe branch selection."""


class WakeAmbiguityError(RuntimeError):
    """Cycle rays do not single out one landing fixed point."""

    def __init__(self, msg, endpoints=None, scores=None):
        super().__init__(msg)
        self.endpoints = endpoints
        self.scores = scores


@dataclass(frozen=True)
class MapParams:
    """The unicritical polynomial z -> z^d + c."""

    d: int
    c: complex

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("degree must be >= 2")

    def apply(self, z: complex, n: int = 1) -> complex:
        for _ in range(n):
            z = z**self.d + self.c
        return z


@dataclass(frozen=True)
class PotentialValue:
    g: float
    undecided: bool
    iterations: int

    def __float__(self):
        return self.g


@dataclass
class RayCurve:
    """Polyline realization of an external ray, potentials strictly
    decreasing along the points."""

    theta: ExternalAngle
    kind: str  # "dyn" | "par"
    points: list[tuple[complex, float]]
    c: Optional[complex] = None
    stalled_at: Optional[float] = None

    @property
    def endpoint(self) -> complex:
        return self.points[-1][0]

    def point_at(self, g: float, tol: float = 1e-12) -> complex:
        for z, gz in self.points:
            if abs(gz - g) <= tol * max(1.0, g):
                return z
        raise KeyError(f"no ray vertex at potential {g}")

    def to_json_dict(self) -> dict:
        out = {
            "theta": str(self.theta),
            "kind": self.kind,
            "points": [[z.real, z.imag, g] for z, g in self.points],
        }
        if self.c is not None:
            out["c"] = [self.c.real, self.c.imag]
        if self.stalled_at is not None:
            out["stalled_at"] = self.stalled_at
        return out


class TraceStalled(RuntimeError):
    """Newton continuation could not pass some potential; carries the
    partial curve."""

    def __init__(self, g_stall: float, partial: RayCurve):
        super().__init__(f"trace stalled at potential {g_stall:.6g}")
        self.g_stall = g_stall
        self.partial = partial


def escape_radius(m: MapParams) -> float:
    """Escape threshold with a wide safety margin: beyond it the orbit grows
    monotonically and the d^n-th root estimate converges fast."""
    return max(2.0, abs(m.c) ** (1.0 / (m.d - 1)) + 1.0) + 10.0


def green(m: MapParams, z: complex, budget: int = GREEN_BUDGET) -> PotentialValue:
    """Green potential G_c(z), 0 with undecided flag when no escape within
    budget."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    g, n, esc = kernels.green_point(
        m.d, m.c.real, m.c.imag, complex(z).real, complex(z).imag, budget, escape_radius(m)
    )
    return PotentialValue(g=g, undecided=not esc, iterations=n)


def parameter_green(d: int, c: complex, budget: int = GREEN_BUDGET) -> PotentialValue:
    """G_M(c) = G_c(c): the dynamical potential of the critical value."""
    return green(MapParams(d, c), c, budget)


def critical_potential(m: MapParams, budget: int = GREEN_BUDGET) -> float:
    """G_c(0); zero for connected Julia sets."""
    return green(m, 0.0, budget).g


def _far_radius(m: MapParams) -> float:
    return max(12.0, escape_radius(m))


def work_band(m: MapParams) -> float:
    """Lower edge of the potential band where the far-field expansion is
    used directly."""
    return math.log(_far_radius(m))


def level_for(m: MapParams, g: float) -> int:
    """Smallest n >= 0 with g * d^n in the working band."""
    gw = work_band(m)
    n = 0
    while g * m.d**n < gw:
        n += 1
        if n > 2000:
            raise ValueError("potential too small to lift into the working band")
    return n


def bottcher_far(m: MapParams, z: complex) -> complex:
    """B_c(z) for |z| in the far field, by the convergent product
    B(z) = z * prod (1 + c/z_k^d)^(1/d^(k+1))."""
    d, c = m.d, m.c
    zk = complex(z)
    acc = 0.0 + 0.0j
    w = 1.0 / d
    for _ in range(120):
        u = c / zk**d
        if abs(u) >= 0.95:
            raise BranchAmbiguityError(
                f"far-field product factor |u|={abs(u):.3g} at |z|={abs(zk):.3g}"
            )
        term = w * cmath.log(1 + u)
        acc += term
        if abs(term) < 1e-18:
            break
        zk = zk**d + c
        w /= d
        if abs(zk) > 1e100:
            break
    return z * cmath.exp(acc)


def bottcher_far_inverse(m: MapParams, tau: complex) -> complex:
    """Solve B_c(z) = tau in the far field by damped fixed point; tau must
    have |tau| >= the far radius."""
    z = tau
    for _ in range(60):
        b = bottcher_far(m, z)
        z_new = z * (tau / b)
        if abs(z_new - z) <= 1e-15 * abs(z_new):
            z = z_new
            break
        z = z_new
    resid = abs(bottcher_far(m, z) - tau)
    if resid > 1e-10 * abs(tau):
        raise ArithmeticError(f"far-field inversion residual {resid:.3g}")
    return z


def bottcher(m: MapParams, z: complex) -> complex:
    """Böttcher coordinate B_c(z) on Delta_c.

    The argument accumulates along the orbit through the log1p factors;
    no principal d^n-th root of an iterate is ever taken.  Factors with
    modulus near 1 would make the branch selection unreliable, so those
    raise instead of silently returning a wrong sheet.
    """
    g0 = critical_potential(m)
    gz = green(m, z)
    if gz.undecided or gz.g <= g0:
        raise DomainError("below critical potential")
    d, c = m.d, m.c
    zk = complex(z)
    acc = 0.0 + 0.0j
    w = 1.0 / d
    for _ in range(2000):
        u = c / zk**d
        if abs(u) >= 0.95:
            raise BranchAmbiguityError(
                f"product factor |1+u| near 0 at |z_k|={abs(zk):.3g}; "
                "point too close to the critical equipotential for safe "
                "branch tracking"
            )
        term = w * cmath.log(1 + u)
        acc += term
        zk = zk**d + c
        w /= d
        if abs(zk) > 1e100:
            break
    return z * cmath.exp(acc)


def _ray_target(m: MapParams, theta: ExternalAngle, g: float) -> tuple[int, complex]:
    """Level n and far-field point w with B(w) = exp(d^n (g + 2 pi i theta))."""
    n = level_for(m, g)
    th_n = theta
    for _ in range(n):
        th_n = multiply_by_d(th_n, m.d)
    gt = g * m.d**n
    tau = cmath.exp(complex(gt, 2 * math.pi * (th_n.num / th_n.den)))
    return n, bottcher_far_inverse(m, tau)


def _march_potentials(g_start: float, g_lo: float, step: float):
    """Potential grid from g_start down to g_lo: linear cap `step`, relative
    cap STEP_RATIO_CAP, always ending exactly at g_lo."""
    out = [g_start]
    g = g_start
    while g > g_lo:
        g_next = max(g - step, g / STEP_RATIO_CAP, g_lo)
        out.append(g_next)
        g = g_next
    return out


def trace_dynamical_ray(
    m: MapParams,
    theta: ExternalAngle,
    g_hi: float,
    g_lo: float,
    step: float = 0.25,
    raise_on_stall: bool = True,
) -> RayCurve:
    """External ray R_theta from potential g_hi down to g_lo.

    Vertices solve B_c(z) = exp(g + 2 pi i theta) via Newton on f^n(z) = w;
    the potential step halves on Newton failure down to a hard floor, below
    which the trace reports a stall carrying the partial curve.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if not (g_hi > g_lo > 0):
        raise ValueError("need g_hi > g_lo > 0")
    g_crit = critical_potential(m)
    if g_lo <= g_crit:
        raise DomainError("below critical potential")

    gw = work_band(m)
    g_start = max(g_hi, gw)
    pts: list[tuple[complex, float]] = []

    n0, z = _ray_target(m, theta, g_start)
    if n0 != 0:
        raise AssertionError("start potential must sit in the working band")
    prev = z
    prev_step_len = 0.0
    if g_start <= g_hi:
        pts.append((z, g_start))

    g = g_start
    floor = step * STEP_FLOOR_FACTOR
    while g > g_lo:
        g_next = max(g - step, g / STEP_RATIO_CAP, g_lo)
        ok = False
        while True:
            n, w = _ray_target(m, theta, g_next)
            z_new, good, _resid, _ = kernels.newton_map_point(
                m.d, m.c.real, m.c.imag, n, w.real, w.imag,
                prev.real, prev.imag, NEWTON_TOL, NEWTON_MAXIT,
            )
            if good:
                jump = abs(z_new - prev)
                cap = 6.0 * prev_step_len + 0.35 * (1.0 + abs(prev))
                if jump <= cap:
                    ok = True
                    break
            if (g - g_next) <= floor:
                break
            g_next = g - (g - g_next) / 2.0  # halve the step and retry
        if not ok:
            curve = RayCurve(theta=theta, kind="dyn", points=pts, c=m.c, stalled_at=g)
            if raise_on_stall:
                raise TraceStalled(g, curve)
            return curve
        prev_step_len = abs(z_new - prev)
        prev = z_new
        g = g_next
        if g <= g_hi + 1e-15:
            pts.append((z_new, g))
    return RayCurve(theta=theta, kind="dyn", points=pts, c=m.c)


def trace_equipotential(
    m: MapParams, g: float, n_samples: int = 256
) -> list[tuple[complex, float]]:
    """Closed equipotential polyline {G_c = g} sampled at n_samples uniform
    angles (exact rationals k/n_samples), Newton-continued around the
    circle.  The first point is appended again at the end."""
    if n_samples < 8:
        raise ValueError("need at least 8 samples")
    if g <= critical_potential(m):
        raise DomainError("below critical potential")
    pts: list[tuple[complex, float]] = []
    prev = None
    for k in range(n_samples):
        theta = ExternalAngle(k, n_samples)
        n, w = _ray_target(m, theta, g)
        if prev is None:
            z = w if n == 0 else None
            if z is None:
                # lift the first sample through decreasing potentials
                z = _descend_to(m, theta, g)
        else:
            z, good, _res, _ = kernels.newton_map_point(
                m.d, m.c.real, m.c.imag, n, w.real, w.imag,
                prev.real, prev.imag, NEWTON_TOL, NEWTON_MAXIT,
            )
            if not good:
                z = _descend_to(m, theta, g)
        pts.append((z, g))
        prev = z
    pts.append(pts[0])
    return pts


def _descend_to(m: MapParams, theta: ExternalAngle, g: float) -> complex:
    """Walk a single ray down to potential g and return that vertex."""
    curve = trace_dynamical_ray(m, theta, max(g * 2, work_band(m) + 0.1), g, step=0.5)
    return curve.endpoint


def trace_parameter_ray(
    d: int,
    theta: ExternalAngle,
    g_hi: float,
    g_lo: float,
    step: float = 0.25,
    raise_on_stall: bool = True,
) -> RayCurve:
    """Parameter-plane external ray: Newton continuation on Phi_n(c) = w
    where Phi_n(c) = f_c^n(c), using forward-mode differentiation for
    dPhi/dc.  The far-field target w is recomputed as c moves since the
    Böttcher expansion depends on c."""
    if not (g_hi > g_lo > 0):
        raise ValueError("need g_hi > g_lo > 0")
    gw = work_band(MapParams(d, 0.0))
    g_start = max(g_hi, gw)
    pts: list[tuple[complex, float]] = []

    c = _param_point(d, theta, g_start, seed=None)
    if g_start <= g_hi:
        pts.append((c, g_start))
    prev = c
    prev_step_len = 0.0
    g = g_start
    floor = step * STEP_FLOOR_FACTOR
    while g > g_lo:
        g_next = max(g - step, g / STEP_RATIO_CAP, g_lo)
        ok = False
        while True:
            try:
                c_new = _param_point(d, theta, g_next, seed=prev)
            except ArithmeticError:
                c_new = None
            if c_new is not None:
                jump = abs(c_new - prev)
                cap = 6.0 * prev_step_len + 0.3 * (1.0 + abs(prev))
                if jump <= cap:
                    ok = True
                    break
            if (g - g_next) <= floor:
                break
            g_next = g - (g - g_next) / 2.0
        if not ok:
            curve = RayCurve(theta=theta, kind="par", points=pts, stalled_at=g)
            if raise_on_stall:
                raise TraceStalled(g, curve)
            return curve
        prev_step_len = abs(c_new - prev)
        prev = c_new
        g = g_next
        if g <= g_hi + 1e-15:
            pts.append((c_new, g))
    return RayCurve(theta=theta, kind="par", points=pts)


def _param_point(
    d: int, theta: ExternalAngle, g: float, seed: Optional[complex]
) -> complex:
    """One parameter-ray vertex: solve B_{M}(c) = exp(g + 2 pi i theta)."""
    m_probe = MapParams(d, seed if seed is not None else 0.0)
    gw = work_band(m_probe)
    lvl = 0
    while g * d**lvl < gw:
        lvl += 1
    th_n = theta
    for _ in range(lvl):
        th_n = multiply_by_d(th_n, d)
    gt = g * d**lvl
    tau = cmath.exp(complex(gt, 2 * math.pi * (th_n.num / th_n.den)))

    c = seed
    if c is None:
        c = tau  # far-field first guess: B_M(c) ~ c + O(1)
    n = lvl + 1  # Phi_n(c) = f_c^(n-1)(c) sits at potential d^(n-1) g
    for _outer in range(12):
        w = bottcher_far_inverse(MapParams(d, c), tau)
        c_new, ok, _res, _ = kernels.newton_param_point(
            d, n, w.real, w.imag, c.real, c.imag, NEWTON_TOL, NEWTON_MAXIT
        )
        if not ok:
            raise ArithmeticError("parameter Newton failed")
        if abs(c_new - c) <= 1e-14 * max(1.0, abs(c_new)):
            return c_new
        c = c_new
    return c


def fixed_points(m: MapParams) -> np.ndarray:
    """All d roots of z^d - z + c = 0."""
    coeffs = np.zeros(m.d + 1, dtype=complex)
    coeffs[0] = 1.0
    coeffs[-2] = -1.0
    coeffs[-1] = m.c
    return np.roots(coeffs)


def dividing_fixed_point(
    m: MapParams,
    cycle: RotationCycle,
    g_land: float = 1e-5,
    ambiguity_ratio: float = 0.5,
) -> complex:
    """The fixed point at which the cycle rays land.

    Two adjacent cycle rays are traced to a small potential; the fixed-point
    root closest to both endpoints wins.  If no root is close to both, or a
    second root is nearly as close, the configuration is ambiguous (wrong
    wake, or traces too short) and WakeAmbiguityError is raised.
    """
    th1, th2 = cycle.angles[0], cycle.angles[1 % len(cycle.angles)]
    ends = []
    for th in (th1, th2):
        try:
            curve = trace_dynamical_ray(m, th, 1.0, g_land, step=0.5)
            ends.append(curve.endpoint)
        except (TraceStalled, DomainError) as exc:
            raise WakeAmbiguityError(f"cycle ray {th} did not reach landing "
                                     f"potential: {exc}") from exc
    roots = fixed_points(m)
    scores = np.array([max(abs(r - ends[0]), abs(r - ends[1])) for r in roots])
    order = np.argsort(scores)
    best, second = scores[order[0]], scores[order[1]] if len(roots) > 1 else np.inf
    gap = abs(ends[0] - ends[1])
    land_tol = max(10.0 * gap, 1e-2)
    if best > land_tol:
        raise WakeAmbiguityError(
            f"no common landing root within {land_tol:.3g} "
            f"(endpoints {gap:.3g} apart); likely outside the wake",
            endpoints=ends, scores=scores.tolist(),
        )
    if second < ambiguity_ratio * land_tol and second < 2.0 * best:
        raise WakeAmbiguityError(
            "two fixed points equally close to the ray endpoints",
            endpoints=ends, scores=scores.tolist(),
        )
    return complex(roots[order[0]])
