import math
import random
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octamap.flow import (
    LevelSpec,
    a_on_u_ab,
    chart_base,
    chart_translation,
    concavity_q,
    concavity_q_closed,
    degenerate_family,
    find_U_crossing,
    gamma0,
    hausdorff,
    integrate,
    nice_loop_endpoints,
    reversal_images,
    trace_nice_loop,
    u_crossings,
    v_closed_forms,
    w4_closed_form,
    w4_stated,
    field_vector,
)
from octamap.invariants import H, G
from octamap.octagon import gs_ab, gs_cd
from octamap.polynomial import variables
from octamap.sampling import random_u_ab_point, random_x_plus_point

LEVEL = LevelSpec(Q(3), Q(4))


@pytest.fixture(scope="module")
def loop():
    return trace_nice_loop(LEVEL)


@pytest.fixture(scope="module")
def x_plus_points():
    rng = random.Random(8)
    return [random_x_plus_point(rng, max_den=60) for _ in range(5)]


def test_level_spec_conversion():
    assert (LEVEL.g, LEVEL.h) == (1, Q(3, 4))
    assert LevelSpec.from_gh(Q(1), Q(3, 4)) == LEVEL


def test_zero_time(x_plus_points):
    traj = integrate(x_plus_points[0], "G", 0.0)
    assert len(traj.times) == 1 and traj.drift == 0


def test_rejects_start_outside_x():
    s = math.sqrt(0.5)
    with pytest.raises(ValueError):
        integrate((s, s, s, s), "G", 1.0)


def test_drift_and_monotonicity(x_plus_points):
    for p in x_plus_points:
        traj = integrate(p, "G", 0.01)
        assert traj.accepted and np.all(np.diff(traj.times) > 0)
        star = [gs_ab(y) + gs_cd(y) for y in traj.samples]
        assert all(s1 < s2 for s1, s2 in zip(star, star[1:]))


def test_backward_integration(x_plus_points):
    traj = integrate(x_plus_points[1], "G", -0.05)
    assert traj.accepted and np.all(np.diff(traj.times) < 0)


def test_flows_commute(x_plus_points):
    p = x_plus_points[2]
    t1, t2 = 0.01, 0.02
    a = integrate(integrate(p, (1, 0), t1).end, (0, 1), t2)
    b = integrate(integrate(p, (0, 1), t2).end, (1, 0), t1)
    assert np.max(np.abs(a.samples[-1] - b.samples[-1])) < 1e-8


def test_projection_keeps_level(x_plus_points):
    traj = integrate(x_plus_points[3], "G", 0.05, project=True)
    assert traj.drift < 1e-12


def test_u_crossing(loop):
    rng = random.Random(9)
    while True:
        p = random_x_plus_point(rng, max_den=60)
        if p[0] + p[1] < 1 and p[2] + p[3] < 1:
            break
    hit = find_U_crossing(p)
    assert abs(hit.event) < 1e-12
    a, b, c, d = hit.point
    xg = field_vector(hit.point)
    normal = (1, 1, 0, 0) if abs(a + b - 1) < 1e-9 else (0, 0, 1, 1)
    assert abs(np.dot(xg, normal)) > 1e-9
    # the crossing is unique along the curve
    traj = integrate(p, "G", math.copysign(50.0, hit.time), tol=math.inf)
    assert len(u_crossings(traj)) == 1


def test_endpoints_example():
    c1, c2 = nice_loop_endpoints(1.0, 0.75)
    assert c1 == pytest.approx((17 - math.sqrt(33)) / 32, abs=1e-12)
    assert c2 == pytest.approx((17 + math.sqrt(33)) / 32, abs=1e-12)


@given(st.fractions(Q(1, 10), 10, max_denominator=50), st.fractions(Q(1, 50), Q(49, 50), max_denominator=50))
def test_gamma0_boundary_values(g, h):
    assert gamma0(0, g, h) == -g
    assert gamma0(1, g, h) == -g * h


def test_every_x_plus_level_has_two_endpoints():
    rng = random.Random(12)
    for _ in range(300):
        p = random_x_plus_point(rng, max_den=100)
        g, h = float(G(p)), float(H(p))
        c1, c2 = nice_loop_endpoints(g, h)
        assert 0 < c1 < c2 < 1


def test_endpoints_reject_bad_level():
    with pytest.raises(ValueError):
        nice_loop_endpoints(100.0, 0.99)


def test_a_on_u_ab_solves_h():
    c, d, h = Q(1, 5), Q(1, 3), Q(3, 4)
    a = a_on_u_ab(c, d, h)
    assert H((a, 1 - a, c, d)) == h


def test_nice_loop(loop):
    assert loop.closure_error < 1e-8
    assert len(loop.cusps) == 2
    assert loop.max_level_error() < 1e-9
    for p in loop.cusps:
        assert p.a + p.b == pytest.approx(1, abs=1e-9) and p.c + p.d == pytest.approx(1, abs=1e-9)


def test_nice_loop_is_I_symmetric(loop):
    mirrored = loop.points[:, [2, 3, 0, 1]]
    assert hausdorff(loop.points, mirrored) < 1e-8


def test_loop_points_flow_to_guard(loop):
    p = tuple(loop.points[len(loop.points) // 3])
    for direction in (1, -1):
        traj = integrate(p, "G", direction * 50.0, tol=math.inf)
        assert traj.status == "guard"


@pytest.mark.parametrize("t", [Q(1, 10), Q(1, 3), Q(1, 100)])
def test_degenerate_family(t):
    n, lam, mu = degenerate_family(t)
    assert n.with_vars(("c", "d")) == ((t / 4) * (lam - t * mu)).with_vars(("c", "d"))


@pytest.mark.xfail(strict=True, reason="the sum λ + tμ has the wrong sign on μ")
def test_degenerate_family_printed_sign():
    t = Q(1, 10)
    n, lam, mu = degenerate_family(t)
    assert n.with_vars(("c", "d")) == ((t / 4) * (lam + t * mu)).with_vars(("c", "d"))


def test_concavity_example():
    q = concavity_q((Q(1, 2), Q(1, 2), Q(1, 4), Q(1, 4)))
    assert q.closed_form == q.direct == -128
    assert q.psi == 0


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_concavity_random(seed):
    rng = random.Random(seed)
    p = random_u_ab_point(rng)
    if concavity_q_closed(p) == 0:
        return
    q = concavity_q(p)
    assert q.closed_form == q.direct < 0 and q.psi == 0


def test_concavity_requires_u_ab():
    with pytest.raises(ValueError):
        concavity_q((Q(1, 2), Q(1, 3), Q(1, 4), Q(1, 4)))


def test_reversal_example():
    r = reversal_images((Q(1, 2), Q(1, 2), Q(1, 4), Q(1, 4)))
    assert r.beta == 1 and r.iota5_matches()
    assert tuple(r.i3_image[2:]) == (1, 0)


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_reversal_derived_forms(seed):
    rng = random.Random(seed)
    p = random_u_ab_point(rng, max_den=40)
    r = reversal_images(p)
    v1, v4 = v_closed_forms(p)
    assert r.iota5_matches() and tuple(r.i3_image[2:]) == (1, 0)
    assert (r.V[0], r.V[3]) == (v1, v4)
    assert v1 * v4 > 0
    assert r.W[3] == w4_closed_form(p)


@pytest.mark.xfail(strict=True, reason="V1 and V4 differ off (c-d)(c+d-1) = 0")
def test_v1_equals_v4_as_printed():
    r = reversal_images((Q(1, 3), Q(2, 3), Q(1, 5), Q(1, 3)))
    assert r.V[0] == r.V[3]


@pytest.mark.xfail(strict=True, reason="W4 = 4(1+d-c)/d, not 4c(2-c)/(1+c-d)")
def test_w4_as_printed():
    p = (Q(1, 3), Q(2, 3), Q(1, 5), Q(1, 3))
    assert reversal_images(p).W[3] == w4_stated(p)


def test_identity_translation(loop):
    base = tuple(loop.points[5])
    assert chart_translation(LEVEL, base, "id").vector.tolist() == [0.0, 0.0]


def test_chart_rejects_off_level_base():
    with pytest.raises(ValueError):
        chart_translation(LEVEL, (0.9, 0.8, 0.9, 0.7), "T3")


@pytest.fixture(scope="module")
def translations():
    base = chart_base(LEVEL)
    tau = chart_translation(LEVEL, base, "T3")
    tau2 = chart_translation(LEVEL, base, "T3T3", guess=2 * tau.vector)
    return tau, tau2


def test_t3_translation(translations):
    tau, tau2 = translations
    assert tau.residual < 1e-9
    assert abs(tau.xg_component) > 1e-6
    assert np.max(np.abs(tau2.vector - 2 * tau.vector)) < 2e-9


def test_level_of_g_along_loop(loop):
    assert all(abs(G(tuple(p)) - 1) < 1e-9 for p in loop.points[::50])
