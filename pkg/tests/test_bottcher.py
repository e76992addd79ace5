"""Green function, Böttcher coordinate, ray and equipotential tracing."""

import cmath
import math

import numpy as np
import pytest

from unicrit.angles import ExternalAngle as A, rotation_cycles
from unicrit.bottcher import (
    DomainError,
    MapParams,
    TraceStalled,
    WakeAmbiguityError,
    bottcher,
    dividing_fixed_point,
    green,
    parameter_green,
    trace_dynamical_ray,
    trace_equipotential,
    trace_parameter_ray,
)

ALPHA_BASILICA = (1 - math.sqrt(5)) / 2  # dividing fixed point of z^2 - 1


def test_green_examples():
    assert abs(green(MapParams(2, 0.0), math.e).g - 1.0) < 1e-9
    pv = green(MapParams(2, 0.0), 0.5)
    assert pv.undecided and pv.g == 0.0
    assert abs(green(MapParams(3, 0.0), math.e**2).g - 2.0) < 1e-9


def test_green_budget_validation():
    with pytest.raises(ValueError):
        green(MapParams(2, 0.0), 1.0, budget=0)


def test_parameter_green_identity():
    # definition identity G_M(c) = G_c(c), exact by construction
    assert parameter_green(2, 4.0).g == green(MapParams(2, 4.0), 4.0).g
    assert parameter_green(2, 4.0).g > 0
    pv = parameter_green(2, -0.5)
    assert pv.undecided and pv.g == 0.0


def test_parameter_green_monotone_toward_cusp():
    cs = [0.26, 0.27, 0.30, 0.35]
    gs = [parameter_green(2, c).g for c in cs]
    assert all(g > 0 for g in gs)
    assert all(a < b for a, b in zip(gs, gs[1:]))


def test_bottcher_identity_for_squaring():
    m = MapParams(2, 0.0)
    assert abs(bottcher(m, 2.0) - 2.0) < 1e-12
    assert abs(bottcher(m, 2j) - 2j) < 1e-12


def test_bottcher_modulus_and_functional_equation():
    m = MapParams(2, -0.5)
    b = bottcher(m, 10.0)
    assert abs(abs(b) - math.exp(green(m, 10.0).g)) < 1e-8
    z = 10.0
    lhs = bottcher(m, m.apply(z))
    rhs = bottcher(m, z) ** 2
    assert abs(lhs - rhs) < 1e-6 * abs(rhs)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_functional_equation_sampled(d):
    rng = np.random.default_rng(d)
    for c in [0.1 + 0.2j, -0.5 + 0.1j, -0.9, 0.3j, -0.2 - 0.4j]:
        m = MapParams(d, c)
        for _ in range(4):
            z = cmath.rect(rng.uniform(2.0, 6.0), rng.uniform(0, 2 * math.pi))
            lhs = bottcher(m, m.apply(z))
            rhs = bottcher(m, z) ** d
            assert abs(lhs - rhs) <= 1e-6 * abs(rhs)


def test_bottcher_domain_error():
    m = MapParams(2, 0.0)
    with pytest.raises(DomainError):
        bottcher(m, 0.5)


def test_dynamical_ray_radial_for_c0():
    m = MapParams(2, 0.0)
    curve = trace_dynamical_ray(m, A(1, 3), 2.0, 0.1, step=0.1)
    w = cmath.exp(2j * math.pi / 3)
    for z, g in curve.points:
        assert abs(z - abs(z) * w) < 1e-6
        assert abs(abs(z) - math.exp(g)) < 1e-9
    gs = [g for _, g in curve.points]
    assert all(a > b for a, b in zip(gs, gs[1:]))


def test_dynamical_ray_theta0_real_segment():
    m = MapParams(2, 0.0)
    curve = trace_dynamical_ray(m, A(0), 2.0, 0.1, step=0.1)
    for z, g in curve.points:
        assert abs(z.imag) < 1e-9
        assert math.exp(0.1) - 1e-9 <= z.real <= math.exp(2.0) + 1e-9


def test_basilica_ray_lands_at_alpha():
    # The 1/3 ray lands at the dividing fixed point; the approach rate is
    # Hölder with exponent log2|f'(alpha)| ~ 0.306, so distances shrink like
    # g^0.306.  Frozen from the tracer itself  (oracle: landing theorem says
    # the limit is alpha; we assert the measured distances and monotonicity).
    m = MapParams(2, -1.0)
    dists = []
    for g_lo in (0.1, 0.01, 1e-3, 1e-4):
        curve = trace_dynamical_ray(m, A(1, 3), 2.0, g_lo, step=0.1)
        dists.append(abs(curve.endpoint - ALPHA_BASILICA))
    assert all(a > b for a, b in zip(dists, dists[1:]))
    assert dists[1] < 0.25  # measured 0.2047 at g = 0.01
    assert dists[3] < 0.06  # measured 0.0480 at g = 1e-4


def test_ray_vertices_reevaluate_through_green():
    m = MapParams(2, -1.0)
    curve = trace_dynamical_ray(m, A(2, 3), 1.5, 0.02, step=0.2)
    for z, g in curve.points:
        assert abs(green(m, z).g - g) < 1e-8


def test_degree_covariance():
    # f maps the theta ray at potential g onto the d*theta ray at d*g
    for d, c in [(2, -1.0), (3, -0.3 + 0.2j)]:
        m = MapParams(d, c)
        curve = trace_dynamical_ray(m, A(1, 7), 1.2, 0.5, step=0.1)
        th2 = A(d, 7)
        for z, g in curve.points:
            b = bottcher(m, m.apply(z))
            want = cmath.exp(complex(d * g, 2 * math.pi * d / 7))
            assert abs(b - want) < 1e-6 * abs(want)
            _ = th2  # angle d/7 is what the exponent encodes


def test_ray_below_critical_potential_rejected():
    m = MapParams(2, 1.0)  # escaping: G_c(0) > 0
    with pytest.raises(DomainError):
        trace_dynamical_ray(m, A(1, 3), 2.0, 1e-4, step=0.1)


def test_trace_stall_carries_partial_curve():
    # ray into a non-colanding point: Newton eventually needs sub-floor steps
    m = MapParams(2, 0.1)
    with pytest.raises(TraceStalled) as exc:
        trace_dynamical_ray(m, A(1, 3), 1.0, 1e-7, step=0.25)
    partial = exc.value.partial
    assert partial.points and partial.stalled_at is not None
    curve = trace_dynamical_ray(m, A(1, 3), 1.0, 1e-7, step=0.25,
                                raise_on_stall=False)
    assert curve.stalled_at is not None and len(curve.points) > 4


def test_equipotential_circles_for_c0():
    m = MapParams(2, 0.0)
    pts = trace_equipotential(m, 1.0, 64)
    assert abs(pts[0][0] - pts[-1][0]) < 1e-10  # closed
    for z, _ in pts:
        assert abs(abs(z) - math.e) < 1e-8
    pts = trace_equipotential(m, math.log(2.0), 64)
    for z, _ in pts:
        assert abs(abs(z) - 2.0) < 1e-8


def winding_number(poly, p):
    tot = 0.0
    for (a, _), (b, _) in zip(poly, poly[1:]):
        tot += cmath.phase((b - p) / (a - p))
    return tot / (2 * math.pi)


def test_equipotential_winds_once_around_c():
    m = MapParams(2, -0.75)
    pts = trace_equipotential(m, 1.0, 128)
    w = winding_number(pts, m.c)
    assert abs(w - 1.0) < 1e-6


def test_parameter_ray_theta_half_lands_near_minus_two():
    curve = trace_parameter_ray(2, A(1, 2), 2.0, 0.05, step=0.1)
    for c, g in curve.points:
        assert abs(c.imag) < 1e-9
    assert abs(curve.endpoint - (-2.0)) < 5e-2  # measured 0.0037


def test_parameter_ray_theta0_real_and_slow_cusp_approach():
    # The theta=0 ray is the real ray c > 1/4 landing at the cusp.  The
    # approach is far slower than the spec's illustrative tolerance (see
    # decisions ledger): measured endpoint at potential 0.05 is c = 0.4592.
    curve = trace_parameter_ray(2, A(0), 2.0, 0.05, step=0.1)
    assert abs(curve.endpoint.imag) < 1e-9
    assert abs(curve.endpoint.real - 0.459237) < 1e-3
    d1 = abs(trace_parameter_ray(2, A(0), 1.0, 0.01, step=0.1).endpoint - 0.25)
    assert d1 < abs(curve.endpoint - 0.25)  # monotone approach to the cusp


def test_parameter_ray_potential_identity():
    # c on a traced parameter ray at potential g has G_M(c) = g
    curve = trace_parameter_ray(2, A(1, 3), 1.5, 0.05, step=0.1)
    for c, g in curve.points[:: max(1, len(curve.points) // 6)]:
        assert abs(parameter_green(2, c).g - g) < 1e-6
    # distance to the parabolic root -3/4 shrinks as the potential drops
    d_hi = abs(trace_parameter_ray(2, A(1, 3), 1.0, 0.05, step=0.1).endpoint + 0.75)
    d_lo = abs(trace_parameter_ray(2, A(1, 3), 1.0, 0.005, step=0.1).endpoint + 0.75)
    assert d_lo < d_hi


def test_dividing_fixed_point_examples():
    cyc = rotation_cycles(2, 1, 2)[0]
    fp = dividing_fixed_point(MapParams(2, -1.0), cyc)
    assert abs(fp - ALPHA_BASILICA) < 1e-9
    with pytest.raises(WakeAmbiguityError):
        dividing_fixed_point(MapParams(2, 0.1), cyc)
    a = dividing_fixed_point(MapParams(2, -0.75 + 0.10j), cyc)
    b = dividing_fixed_point(MapParams(2, -0.75 + 0.11j), cyc)
    assert abs(a - b) < 0.05
