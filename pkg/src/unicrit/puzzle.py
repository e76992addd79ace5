"""Yoccoz puzzle pieces by analytic pullback, point location, the critical
tableau, and the first return / first landing maps.

A piece is realized as a closed contour (rays + equipotential arcs) plus an
exact combinatorial boundary: support arcs on the circle of angles and the
co-landing pairs that span the gaps between them.  Contours propagate by
d-th-root continuation of the parent contour; exact angles propagate with
them, anchored geometrically (sector tests, with a Green-gradient flow to
the far field when the sector test cannot separate the d candidate sheets).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .angles import ExternalAngle, RotationCycle, multiply_by_d
from .bottcher import (
    MapParams,
    TraceStalled,
    WakeAmbiguityError,
    dividing_fixed_point,
    green,
    trace_dynamical_ray,
    work_band,
)
from .geometry import (
    PullbackError,
    angle_of_point,
    contains,
    d_th_roots,
    equipotential_arc,
    point_loop_distance,
    ray_segment,
    resample_double,
    winding_number,
)

TAU_RAY_DEFAULT = 1e-9
RAY_FLOOR = 1e-10
RAY_STEP = 0.2


class PuzzleFailure(Exception):
    kind = "failure"

    def __init__(self, msg, depth=None):
        super().__init__(msg)
        self.depth = depth


class OutsideFailure(PuzzleFailure):
    kind = "outside"


class OnRayFailure(PuzzleFailure):
    kind = "on_ray"


class AlphaHitFailure(PuzzleFailure):
    kind = "alpha_hit"


class EscapedFailure(PuzzleFailure):
    kind = "escaped"


class NoReturnFailure(PuzzleFailure):
    kind = "no_return_within_budget"


@dataclass
class Run:
    """One stretch of a piece contour: a boundary vertex, a ray segment, or
    an equipotential arc, with its index span in the contour array."""

    kind: str  # "vertex" | "ray" | "arc"
    start: int
    length: int
    angle: Optional[ExternalAngle] = None  # rays
    arc: Optional[tuple[ExternalAngle, ExternalAngle]] = None  # arcs


@dataclass
class PuzzlePiece:
    """Combinatorial descriptor plus traced geometry of one puzzle piece."""

    depth: int
    height: float
    contour: np.ndarray
    runs: list[Run]
    critical: bool

    @property
    def arcs(self) -> list[tuple[ExternalAngle, ExternalAngle]]:
        return [r.arc for r in self.runs if r.kind == "arc"]

    @property
    def boundary_pairs(self) -> list[tuple[ExternalAngle, ExternalAngle]]:
        """Angle pairs landing at common boundary vertices: the gap between
        consecutive support arcs in circular order."""
        arcs = sorted(self.arcs, key=lambda ab: ab[0].as_fraction())
        pairs = []
        for i, (_, hi) in enumerate(arcs):
            nxt_lo = arcs[(i + 1) % len(arcs)][0]
            pairs.append((hi, nxt_lo))
        return pairs

    @property
    def angles(self) -> list[ExternalAngle]:
        out = set()
        for a, b in self.arcs:
            out.add(a)
            out.add(b)
        return sorted(out)

    @property
    def label(self) -> str:
        return f"{self.depth}:{self.angles[0]}"

    @property
    def vertices(self) -> list[complex]:
        return [complex(self.contour[r.start]) for r in self.runs if r.kind == "vertex"]

    def to_json_dict(self) -> dict:
        return {
            "depth": self.depth,
            "height": self.height,
            "angles": [[str(a), str(b)] for a, b in self.boundary_pairs],
            "critical": self.critical,
            "label": self.label,
        }


@dataclass
class Tableau:
    """Critical tableau: labels of the critical pieces by depth, with the
    first failure recorded."""

    c: complex
    rows: list[str]
    failure_kind: Optional[str] = None
    failure_depth: Optional[int] = None

    @property
    def max_depth(self) -> int:
        return len(self.rows) - 1

    def to_json_dict(self) -> dict:
        out = {
            "c": [self.c.real, self.c.imag],
            "rows": list(self.rows),
        }
        if self.failure_kind is not None:
            out["failure_kind"] = self.failure_kind
            out["failure_depth"] = self.failure_depth
        return out


def _arc_contains(lo: Fraction, hi: Fraction, x: Fraction, closed=True) -> bool:
    """Is x in the ccw arc (lo, hi), endpoints included when closed."""
    width = (hi - lo) % 1
    off = (x - lo) % 1
    if closed:
        return off <= width
    return 0 < off < width


class PuzzleContext:
    """Shared geometry cache for one (map, cycle, height) configuration."""

    def __init__(
        self,
        m: MapParams,
        cycle: RotationCycle,
        xi: float = 1.0,
        tau_ray: float = TAU_RAY_DEFAULT,
        ray_floor: float = RAY_FLOOR,
    ):
        if cycle.d != m.d:
            raise ValueError("cycle degree does not match the map degree")
        self.m = m
        self.cycle = cycle
        self.xi = xi
        self.tau_ray = tau_ray
        self.g_crit = green(m, 0.0).g
        # disconnected Julia sets are fine as long as pieces stay above the
        # critical potential; the ray floor respects that truncation
        self.ray_floor = max(ray_floor * xi, self.g_crit * 1.05 + 1e-300)
        self.alpha = dividing_fixed_point(m, cycle, g_land=max(1e-5, self.ray_floor))
        self._cycle_rays = {}
        g_top = max(m.d * xi, work_band(m) + 0.5)
        for th in cycle.angles:
            self._cycle_rays[th] = trace_dynamical_ray(
                m, th, g_top, self.ray_floor, step=RAY_STEP
            )
        self._depth0: Optional[list[PuzzlePiece]] = None
        self._sectors: Optional[list[np.ndarray]] = None
        # tableau triangle rows: _tri[j][k] = piece of depth k containing f^j(0)
        self._orbit: list[complex] = [0.0 + 0.0j]
        self._tri: dict[tuple[int, int], PuzzlePiece] = {}
        self._critical_chain: list[PuzzlePiece] = []

    # -- depth 0 ---------------------------------------------------------

    def orbit_point(self, j: int) -> complex:
        while len(self._orbit) <= j:
            self._orbit.append(self.m.apply(self._orbit[-1]))
        return self._orbit[j]

    def height(self, depth: int) -> float:
        h = self.xi / self.m.d**depth
        if h <= self.g_crit:
            raise OutsideFailure(
                f"depth {depth} height {h:.3g} below critical potential "
                f"{self.g_crit:.3g}", depth=depth,
            )
        return h

    def depth0_pieces(self) -> list[PuzzlePiece]:
        if self._depth0 is None:
            self._depth0 = self._build_depth0()
        return self._depth0

    def _build_depth0(self) -> list[PuzzlePiece]:
        q = len(self.cycle.angles)
        xi = self.xi
        pieces = []
        for j in range(q):
            th_a = self.cycle.angles[j]
            th_b = self.cycle.angles[(j + 1) % q]
            ray_a = self._cycle_rays[th_a]
            ray_b = self._cycle_rays[th_b]
            seg_a = ray_segment(ray_a, xi, 0.0)[::-1]  # ascending potential
            seg_b = ray_segment(ray_b, xi, 0.0)  # descending
            arc = equipotential_arc(self.m, th_a, th_b, xi, seed=seg_a[-1])
            contour = np.concatenate(
                [[self.alpha], seg_a, arc[1:-1], seg_b]
            ).astype(complex)
            runs = [
                Run("vertex", 0, 1),
                Run("ray", 1, len(seg_a), angle=th_a),
                Run("arc", 1 + len(seg_a), len(arc) - 2, arc=(th_a, th_b)),
                Run(
                    "ray",
                    1 + len(seg_a) + len(arc) - 2,
                    len(seg_b),
                    angle=th_b,
                ),
            ]
            crit = contains(contour, 0.0)
            pieces.append(
                PuzzlePiece(
                    depth=0,
                    height=xi,
                    contour=contour,
                    runs=runs,
                    critical=crit,
                )
            )
        ncrit = sum(1 for p in pieces if p.critical)
        if ncrit != 1:
            raise PuzzleFailure(
                f"expected exactly one critical depth-0 piece, found {ncrit}"
            )
        return pieces

    def depth0_of(self, z: complex) -> PuzzlePiece:
        """Depth-0 piece containing z; on-ray dead zone and equipotential
        checks apply."""
        gz = green(self.m, z)
        if not gz.undecided and gz.g >= self.xi:
            raise OutsideFailure(f"potential {gz.g:.3g} above height {self.xi}")
        if abs(z - self.alpha) < max(self.tau_ray, 1e-12):
            raise AlphaHitFailure("point at the dividing fixed point")
        best = None
        for p in self.depth0_pieces():
            dist = point_loop_distance(p.contour, z)
            if dist < self.tau_ray:
                raise OnRayFailure(f"within {self.tau_ray:g} of depth-0 boundary")
            if contains(p.contour, z):
                best = p
                break
        if best is None:
            raise OutsideFailure("no depth-0 piece contains the point")
        return best

    def sector_arc_of(self, z: complex) -> tuple[ExternalAngle, ExternalAngle]:
        """Angular support arc of the depth-0 piece containing z."""
        p = self.depth0_of(z)
        return p.arcs[0]

    # -- pullback of pieces ----------------------------------------------

    def child_containing(self, parent: PuzzlePiece, w: complex) -> PuzzlePiece:
        """The depth-(k+1) piece f^{-1}(parent) component containing w."""
        m = self.m
        h_child = parent.height / m.d
        if h_child <= self.g_crit:
            raise OutsideFailure(
                f"depth {parent.depth + 1} below critical potential",
                depth=parent.depth + 1,
            )
        gw = green(m, w)
        if not gw.undecided and gw.g >= h_child:
            raise OutsideFailure(
                f"point potential {gw.g:.3g} above depth-{parent.depth + 1} "
                f"height {h_child:.3g}", depth=parent.depth + 1,
            )
        loop = parent.contour
        crit_value_inside = contains(loop, m.c)
        scale = 1
        cur = loop
        for attempt in range(5):
            try:
                out, critical = _pullback_runs(m, cur, w, crit_value_inside)
                break
            except PullbackError:
                if attempt == 4:
                    raise
                cur = resample_double(cur)
                scale *= 2
        child_contour, sheets = out
        dist = point_loop_distance(child_contour, w)
        if dist < self.tau_ray:
            raise OnRayFailure(
                f"point within {self.tau_ray:g} of depth-{parent.depth + 1} boundary"
            )
        runs = self._child_runs(parent, child_contour, sheets, scale, critical, w)
        return PuzzlePiece(
            depth=parent.depth + 1,
            height=parent.height / m.d,
            contour=child_contour,
            runs=runs,
            critical=critical,
        )

    def _child_runs(self, parent, child_contour, sheets, scale, critical, w):
        """Exact boundary angles of a pulled-back piece.

        Every equipotential-arc run of the child is one of the d preimage
        arcs of its parent run; which one is resolved per run (the angular
        jump across a boundary vertex can wrap an extra 1/d, so a single
        global anchor is not enough).  Ray runs inherit the endpoints of
        their adjacent arc run.
        """
        d = self.m.d
        sheet_count = d if critical else 1
        n_par = len(parent.contour) * scale
        sector = None
        if not critical:
            try:
                s_lo, s_hi = self.sector_arc_of(w)
                sector = (s_lo.as_fraction(), s_hi.as_fraction())
            except PuzzleFailure:
                sector = None

        def shift(theta: ExternalAngle, k: int) -> ExternalAngle:
            f = (theta.as_fraction() + k) / d
            return ExternalAngle(f.numerator, f.denominator)

        runs: list[Run] = []
        for s in range(sheet_count):
            off = s * n_par
            child_arcs: dict[int, tuple[ExternalAngle, ExternalAngle]] = {}
            for ridx, r in enumerate(parent.runs):
                if r.kind != "arc":
                    continue
                k = self._resolve_arc_sheet(
                    parent, r, child_contour, scale, off, sector, shift
                )
                a, b = r.arc
                width = ((b.as_fraction() - a.as_fraction()) % 1) / d
                lo = shift(a, k)
                hi_f = (lo.as_fraction() + width) % 1
                child_arcs[ridx] = (lo, ExternalAngle(hi_f.numerator, hi_f.denominator))
            for ridx, r in enumerate(parent.runs):
                start = r.start * scale + off
                length = max(1, r.length * scale)
                if r.kind == "vertex":
                    runs.append(Run("vertex", start, 1))
                elif r.kind == "arc":
                    runs.append(Run("arc", start, length, arc=child_arcs[ridx]))
                else:
                    n_runs = len(parent.runs)
                    if parent.runs[(ridx + 1) % n_runs].kind == "arc":
                        ang = child_arcs[(ridx + 1) % n_runs][0]
                    elif parent.runs[ridx - 1].kind == "arc":
                        ang = child_arcs[ridx - 1][1]
                    else:
                        raise PullbackError("ray run without an adjacent arc")
                    runs.append(Run("ray", start, length, angle=ang))
        self._validate_runs(parent, runs, critical)
        return runs

    def _resolve_arc_sheet(self, parent, arc_run, child_contour, scale, off,
                           sector, shift):
        """Which of the d preimage arcs this child arc run is."""
        d = self.m.d
        a, b = arc_run.arc
        width = ((b.as_fraction() - a.as_fraction()) % 1) / d
        viable = list(range(d))
        if sector is not None:
            s_lo, s_hi = sector
            filtered = []
            for k in viable:
                lo = shift(a, k).as_fraction()
                hi = (lo + width) % 1
                if _arc_contains(s_lo, s_hi, lo) and _arc_contains(s_lo, s_hi, hi):
                    filtered.append(k)
            if len(filtered) == 1:
                return filtered[0]
            if filtered:
                viable = filtered
        mid_par_idx = arc_run.start + arc_run.length // 2
        idx = mid_par_idx * scale + off
        p = complex(child_contour[idx])
        theta_star = angle_of_point(self.m, p, parent.height / d)
        best_k, best_err = None, 2.0
        w_f = float(width)
        for k in viable:
            lo = float(shift(a, k).as_fraction())
            offs = (theta_star - lo) % 1.0
            err = 0.0 if offs <= w_f else min(offs - w_f, 1.0 - offs)
            if err < best_err:
                best_err, best_k = err, k
        if best_k is None or best_err > 1.0 / (4 * d):
            raise PullbackError(
                f"flow anchor failed: angle {theta_star:.6f} not on any "
                f"candidate arc (err {best_err:.3g})"
            )
        return best_k

    def _validate_runs(self, parent, runs, critical):
        """Jordan consistency: the extra 1/d wraps across boundary vertices
        must total d-1 for a non-critical component and 0 for the critical
        one."""
        d = self.m.d
        ray_angles = [r.angle.as_fraction() for r in runs if r.kind == "ray"]
        par_rays = [r.angle.as_fraction() for r in parent.runs if r.kind == "ray"]
        sheets = d if critical else 1
        total_j = 0
        n = len(ray_angles)
        for i in range(1, n, 2):
            phi_end = ray_angles[i]
            phi_next = ray_angles[(i + 1) % n]
            j_par_end = par_rays[i % len(par_rays)]
            j_par_next = par_rays[(i + 1) % len(par_rays)]
            jump_child = (phi_next - phi_end) % 1
            jump_par = (j_par_next - j_par_end) % 1
            extra = jump_child * d - jump_par
            if extra.denominator != 1 or not (0 <= extra < d):
                raise PullbackError("inconsistent angular jump across a vertex")
            total_j += int(extra)
        expect = 0 if critical else d - 1
        if total_j != expect:
            raise PullbackError(
                f"vertex wrap total {total_j} != {expect}; "
                "sheet resolution is inconsistent"
            )

    # -- tableau ----------------------------------------------------------

    def triangle_piece(self, j: int, k: int) -> PuzzlePiece:
        """Piece of depth k containing f^j(0), j >= 1 (the tableau triangle)."""
        key = (j, k)
        if key in self._tri:
            return self._tri[key]
        w = self.orbit_point(j)
        if k == 0:
            piece = self.depth0_of(w)
        else:
            parent = self.triangle_piece(j + 1, k - 1)
            piece = self.child_containing(parent, w)
        self._tri[key] = piece
        return piece

    def critical_piece(self, k: int) -> PuzzlePiece:
        """Y^k, the depth-k piece containing the critical point."""
        chain = self._critical_chain
        if not chain:
            for p in self.depth0_pieces():
                if p.critical:
                    chain.append(p)
        while len(chain) <= k:
            kk = len(chain)
            value_piece = self.triangle_piece(1, kk - 1)
            yk = self.child_containing(value_piece, 0.0)
            if not yk.critical:
                raise PuzzleFailure(
                    f"depth-{kk} pullback of the value piece is not critical"
                )
            chain.append(yk)
        return chain[k]

    def piece_contains(self, piece: PuzzlePiece, z: complex) -> bool:
        dist = point_loop_distance(piece.contour, z)
        if dist < self.tau_ray:
            raise OnRayFailure(
                f"point within {self.tau_ray:g} of depth-{piece.depth} boundary"
            )
        return contains(piece.contour, z)


def _pullback_runs(m, loop, w, crit_value_inside):
    """Pull back a closed contour; returns ((contour, sheets), critical)."""
    roots0 = d_th_roots(m, loop[0])
    pts = np.append(loop, loop[0])
    from . import kernels

    if crit_value_inside:
        seed = roots0[0]
        sheets = []
        for _ in range(m.d):
            out, ok = kernels.pullback_polyline(m.d, m.c.real, m.c.imag, pts, seed)
            if not ok:
                raise PullbackError("ambiguous root continuation")
            out = np.asarray(out)
            sheets.append(out[:-1])
            seed = out[-1]
        if abs(seed - sheets[0][0]) > 1e-6 * max(1.0, abs(seed)):
            raise PullbackError("monodromy did not close after d circuits")
        contour = np.concatenate(sheets)
        if abs(winding_number(contour, w) - 1) > 0.4:
            raise PullbackError("target point not inside the critical pullback")
        return (contour, m.d), True
    for seed in roots0:
        out, ok = kernels.pullback_polyline(m.d, m.c.real, m.c.imag, pts, seed)
        if not ok:
            raise PullbackError("ambiguous root continuation")
        out = np.asarray(out)
        if abs(out[-1] - out[0]) > 1e-6 * max(1.0, abs(out[-1])):
            raise PullbackError("branch did not close on a non-critical loop")
        sheet = out[:-1]
        if abs(winding_number(sheet, w) - 1) < 0.4:
            return (sheet, 1), False
    raise PullbackError("no preimage component contains the target point")


# -- public operations -----------------------------------------------------


def depth0_partition(
    m: MapParams, cycle: RotationCycle, xi: float = 1.0, **kw
) -> list[PuzzlePiece]:
    """The q puzzle pieces of depth 0 cut by the cycle rays through the
    dividing fixed point and the height-xi equipotential."""
    ctx = PuzzleContext(m, cycle, xi=xi, **kw)
    return ctx.depth0_pieces()


def locate(
    ctx: PuzzleContext, z: complex, n: int
) -> PuzzlePiece:
    """The depth-n piece containing z, by descending pullbacks along the
    orbit of z.  Raises OutsideFailure / OnRayFailure as appropriate."""
    gz = green(ctx.m, z)
    if not gz.undecided and gz.g >= ctx.height(n):
        raise OutsideFailure(
            f"potential {gz.g:.3g} at or above height {ctx.height(n):.3g}", depth=n
        )
    orbit = [complex(z)]
    for _ in range(n):
        orbit.append(ctx.m.apply(orbit[-1]))
    piece = ctx.depth0_of(orbit[n])
    for k in range(1, n + 1):
        piece = ctx.child_containing(piece, orbit[n - k])
    return piece


def critical_tableau(ctx: PuzzleContext, max_depth: int) -> Tableau:
    """Labels of the critical pieces Y^0..Y^N, stopping at the first failure
    with its kind recorded."""
    rows = []
    failure_kind = None
    failure_depth = None
    for k in range(max_depth + 1):
        try:
            rows.append(ctx.critical_piece(k).label)
        except AlphaHitFailure:
            failure_kind, failure_depth = "alpha_hit", k
            break
        except OnRayFailure:
            failure_kind, failure_depth = "on_ray", k
            break
        except (OutsideFailure, EscapedFailure):
            failure_kind, failure_depth = "escaped", k
            break
        except (PullbackError, TraceStalled, PuzzleFailure) as exc:
            failure_kind, failure_depth = "on_ray", k
            break
    return Tableau(
        c=ctx.m.c, rows=rows, failure_kind=failure_kind, failure_depth=failure_depth
    )


def tableau_for(
    d: int,
    c: complex,
    cycle: RotationCycle,
    max_depth: int,
    xi: float = 1.0,
    **kw,
) -> Tableau:
    """Tableau with graceful handling of parameters outside the wake or with
    fast-escaping critical orbits, where the puzzle scaffolding itself cannot
    be erected."""
    m = MapParams(d, c)
    gm = green(m, c)
    if not gm.undecided and gm.g >= d * xi:
        return Tableau(c=c, rows=[], failure_kind="escaped", failure_depth=0)
    try:
        ctx = PuzzleContext(m, cycle, xi=xi, **kw)
    except (TraceStalled, WakeAmbiguityError):
        g0 = green(m, 0.0)
        if not g0.undecided and g0.g > 0:
            depth = 0
            while xi / d ** (depth + 1) > g0.g and depth < max_depth:
                depth += 1
            return Tableau(c=c, rows=[], failure_kind="escaped",
                           failure_depth=depth)
        return Tableau(c=c, rows=[], failure_kind="on_ray", failure_depth=0)
    return critical_tableau(ctx, max_depth)


def first_return(
    ctx: PuzzleContext, n: int, budget: int = 4096
) -> tuple[int, PuzzlePiece]:
    """Smallest r >= 1 with f^r(0) in Y^n, plus the critical component
    Y^{n+r} of the return domain (the first child when centered at 0)."""
    yn = ctx.critical_piece(n)
    for r in range(1, budget + 1):
        w = ctx.orbit_point(r)
        if ctx.piece_contains(yn, w):
            return r, ctx.critical_piece(n + r)
    raise NoReturnFailure(f"no return to Y^{n} within {budget} iterates", depth=n)


def landing_components(
    ctx: PuzzleContext,
    n: int,
    seeds: Iterable[complex],
    budget: int = 4096,
) -> dict[complex, tuple[Optional[int], Optional[str]]]:
    """First landing data: for each seed the smallest l >= 0 with f^l(seed)
    in Y^n and the label of its component of the landing domain.  Unlanded
    seeds map to (None, None); per-seed failures do not abort the batch."""
    yn = ctx.critical_piece(n)
    out = {}
    for z0 in seeds:
        z0 = complex(z0)
        try:
            z = z0
            found = None
            for ell in range(budget + 1):
                if ctx.piece_contains(yn, z):
                    found = ell
                    break
                z = ctx.m.apply(z)
            if found is None:
                out[z0] = (None, None)
                continue
            # pull Y^n back along the seed orbit to name the component
            piece = yn
            orbit = [z0]
            for _ in range(found):
                orbit.append(ctx.m.apply(orbit[-1]))
            for k in range(found - 1, -1, -1):
                piece = ctx.child_containing(piece, orbit[k])
            out[z0] = (found, piece.label)
        except PuzzleFailure as exc:
            out[z0] = (None, f"failure:{exc.kind}")
    return out


def all_pieces(ctx: PuzzleContext, n: int) -> list[PuzzlePiece]:
    """Every depth-n piece, by exhaustive pullback (d components of every
    depth-(n-1) piece, deduplicated).  Exponential in n; meant for renders
    and for cross-checking locate at small depth."""
    level = list(ctx.depth0_pieces())
    for _ in range(n):
        nxt: list[PuzzlePiece] = []
        for p in level:
            nxt.extend(_all_children(ctx, p))
        # dedupe by label
        seen = {}
        for p in nxt:
            seen.setdefault(p.label, p)
        level = list(seen.values())
    return level


def _all_children(ctx: PuzzleContext, parent: PuzzlePiece) -> list[PuzzlePiece]:
    m = ctx.m
    if contains(parent.contour, m.c):
        child = ctx.child_containing(parent, _interior_point_of_preimage(ctx, parent))
        return [child]
    out = []
    seen_starts: list[complex] = []
    loop = parent.contour
    pts = np.append(loop, loop[0])
    from . import kernels

    for seed in d_th_roots(m, loop[0]):
        res, ok = kernels.pullback_polyline(m.d, m.c.real, m.c.imag, pts, seed)
        res = np.asarray(res)
        if not ok:
            # refine once for stubborn components
            loop2 = resample_double(loop)
            pts2 = np.append(loop2, loop2[0])
            res, ok = kernels.pullback_polyline(m.d, m.c.real, m.c.imag, pts2, seed)
            res = np.asarray(res)
            if not ok:
                raise PullbackError("component enumeration failed")
        start = res[0]
        if any(abs(start - s) < 1e-9 * (1 + abs(start)) for s in seen_starts):
            continue
        seen_starts.append(start)
        sheet = res[:-1]
        probe = _interior_probe(sheet)
        out.append(ctx.child_containing(parent, probe))
    uniq = {}
    for p in out:
        uniq.setdefault(p.label, p)
    return list(uniq.values())


def _interior_probe(loop: np.ndarray) -> complex:
    """A point inside a Jordan polyline: centroid, nudged if necessary."""
    cen = complex(loop.mean())
    if abs(winding_number(loop, cen) - 1) < 0.4:
        return cen
    # fall back: average of a vertex and the far side
    for frac in (0.25, 0.5, 0.75):
        cand = complex((1 - frac) * loop[0] + frac * loop[len(loop) // 2])
        if abs(winding_number(loop, cand) - 1) < 0.4:
            return cand
    raise PullbackError("could not find an interior probe point")


def _interior_point_of_preimage(ctx: PuzzleContext, parent: PuzzlePiece) -> complex:
    """Interior seed for the critical pullback: 0 works since the critical
    piece is the full preimage."""
    return 0.0 + 0.0j
