import random
from fractions import Fraction as Q

import pytest
from hypothesis import given

from conftest import HALF_QUARTER, REGULAR_EXACT, REGULAR_FLOAT, SAMPLE_CONVEX, points
from octamap.invariants import (
    F1,
    F2,
    G,
    G_factored,
    f1_factors,
    f2_factors,
    in_y_set,
    invariant_report,
    membership,
    rational_y_points,
    y_point,
    y_polynomial,
)
from octamap.maps import apply_word, gen_A, gen_D, gen_I, gen_J, t3
from octamap.octagon import convex_constraints, g_ab, g_cd, gs_ab, gs_cd
from octamap.sampling import random_box_point, random_convex_point
from octamap.scalar import DomainError

Y_POINT = (Q(1), Q(1, 2), Q(-1, 2), Q(-1))


def _both(f, g, p):
    try:
        return f(p), g(p)
    except (DomainError, ZeroDivisionError):
        return None


def test_values_at_half_quarter():
    r = invariant_report(HALF_QUARTER)
    assert (r.F1, r.F2, r.G) == (Q(25, 64), Q(729, 64), 11)
    assert G_factored(HALF_QUARTER) == 11


def test_values_at_regular_octagon():
    assert (F1(REGULAR_EXACT), F2(REGULAR_EXACT), G(REGULAR_EXACT)) == (4, 4, 0)
    assert F1(REGULAR_FLOAT) == pytest.approx(4)
    assert not membership(REGULAR_EXACT).in_X


@pytest.mark.parametrize("g", [gen_A, gen_D, t3])
@given(p=points())
def test_exact_invariance(g, p):
    pair = _both(lambda q: (F1(g(q)), F2(g(q))), lambda q: (F1(q), F2(q)), p)
    if pair:
        assert pair[0] == pair[1]


@given(points())
def test_symmetries_I_and_J(p):
    pair = _both(lambda q: (F1(gen_I(q)), F2(gen_I(q)), F1(gen_J(q))), lambda q: (F1(q), F2(q), F2(q)), p)
    if pair:
        assert pair[0] == pair[1]


@given(points())
def test_G_factorization(p):
    pair = _both(G, G_factored, p)
    if pair:
        assert pair[0] == pair[1]


def test_report_json_and_t3_invariance():
    p = (Q(9, 10), Q(4, 5), Q(9, 10), Q(7, 10))
    r0, r1 = invariant_report(p), invariant_report(t3(p))
    assert (r0.F1, r0.F2, r0.G) == (r1.F1, r1.F2, r1.G)
    js = r0.to_json()
    assert js["F1"] == "18161/4200" and len(js["factor_signs"]) == 12


def test_membership_examples():
    assert membership(SAMPLE_CONVEX).component == (-1, 1)
    assert membership(apply_word("JD", SAMPLE_CONVEX)).in_X_plus
    with pytest.raises(DomainError):
        membership((Q(0), Q(1), Q(1), Q(1)))


def test_y_polynomial_values():
    assert y_polynomial(3, 4) == 3321
    assert y_polynomial(0, -2) == 0


def test_y_polynomial_positive_on_positive_quadrant():
    grid = [Q(i, 2) for i in range(1, 201)]
    assert all(y_polynomial(x, y) > 0 for x in grid[::7] for y in grid[::5])


def test_y_point_example():
    assert in_y_set(Y_POINT)
    assert (F1(Y_POINT), F2(Y_POINT)) == (0, -2)
    assert not in_y_set(REGULAR_EXACT)


def test_constructed_y_points():
    for p in rational_y_points(8, seed=2):
        assert in_y_set(p)
        assert y_polynomial(F1(p), F2(p)) == 0


def test_float_y_points():
    rng = random.Random(4)
    done = 0
    while done < 20:
        a, c = rng.uniform(-2, 2), rng.uniform(-2, 2)
        try:
            p = y_point(a, c, exact=False)
        except (ValueError, DomainError):
            continue
        if min(abs(x) for x in p) < 1e-3:
            continue
        done += 1
        assert in_y_set(p, 1e-9)
        f1, f2 = F1(p), F2(p)
        assert abs(y_polynomial(f1, f2)) <= 1e-9 * max(1.0, (abs(f1) + abs(f2)) ** 3)


def test_y_point_exact_needs_square():
    with pytest.raises(ValueError):
        y_point(Q(2), Q(2))


def test_positivity_lemma():
    rng = random.Random(5)
    seen = 0
    while seen < 1000:
        p = random_box_point(rng)
        if not convex_constraints(p):
            continue
        seen += 1
        assert all(x > 0 for x in f1_factors(p) + f2_factors(p)), p


def test_connect_chart_bounds():
    rng = random.Random(6)
    for _ in range(1000):
        p = random_convex_point(rng)
        assert all(-2 < f(p) < 2 for f in (g_ab, g_cd, gs_ab, gs_cd)), p
