import math
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import points, rationals
from octamap.invariants import F1, F2, G
from octamap.octagon import g_ab, g_cd
from octamap.scalar import (
    DomainError,
    Dual4,
    Surd,
    central_difference,
    exact_gradient,
    fmt_rat,
    is_zero,
    jacobian,
    parse_scalar,
    rat_parse,
    sign,
)


@pytest.mark.parametrize("text,value", [("3/4", Q(3, 4)), ("-17/74", Q(-17, 74)), ("2", Q(2)), ("6/8", Q(3, 4))])
def test_rat_parse(text, value):
    r = rat_parse(text)
    assert r == value and math.gcd(r.numerator, r.denominator) == 1


@pytest.mark.parametrize("bad", ["", "1/", "a/b", "1.5/2", "--3"])
def test_rat_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        rat_parse(bad)


def test_rat_parse_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rat_parse("3/0")


def test_parse_scalar_decimal_is_exact():
    assert parse_scalar("0.9") == Q(9, 10)
    assert parse_scalar("0.9", exact=False) == 0.9
    with pytest.raises(ValueError):
        parse_scalar("sqrt(2)")


@given(rationals(nonzero=False))
def test_fmt_round_trip(x):
    assert rat_parse(fmt_rat(x)) == x


@given(rationals(), rationals(), rationals())
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


def test_gradient_of_product():
    assert exact_gradient(lambda p: p[0] * p[1], (2, 3, 5, 7)) == (6, (3, 2, 0, 0))


def test_gradient_of_f1_value(half_quarter):
    value, grad = exact_gradient(F1, half_quarter)
    assert value == Q(25, 64)
    fd = central_difference(F1, half_quarter)
    assert all(math.isclose(float(g), f, rel_tol=1e-5, abs_tol=1e-8) for g, f in zip(grad, fd))


@given(rationals(Q(1, 10), 3))
def test_g_ab_gradient_ignores_c_d(s):
    value, grad = exact_gradient(g_ab, (s, s, s, s))
    assert value == (1 - 2 * s * s) / (s * s)
    assert grad[2] == grad[3] == 0


@pytest.mark.parametrize("f", [F1, F2, G, g_ab, g_cd])
@given(p=points(Q(1, 5), 3))
def test_gradient_matches_finite_differences(f, p):
    try:
        _, grad = exact_gradient(f, p)
    except DomainError:
        return
    fd = central_difference(f, p)
    for g, d in zip(grad, fd):
        assert math.isclose(float(g), d, rel_tol=1e-5, abs_tol=1e-6 * max(1.0, abs(d)))


def test_gradient_outside_domain():
    with pytest.raises(DomainError):
        exact_gradient(lambda p: 1 / (p[0] - p[1]), (1, 1, 2, 3))


@given(points(), points())
def test_chain_rule(p, v):
    # f(g(x)) with g(x) = (ab, b+c, cd, a-d), f = x0*x2 + x1^2
    def g(x):
        a, b, c, d = x
        return (a * b, b + c, c * d, a - d)

    def f(y):
        return y[0] * y[2] + y[1] * y[1]

    gp, jg = jacobian(g, p)
    _, gf = exact_gradient(f, gp)
    _, direct = exact_gradient(lambda x: f(g(x)), p)
    composed = tuple(sum(gf[i] * jg[i][j] for i in range(4)) for j in range(4))
    assert direct == composed


def test_dual_constant_lift_has_zero_partials():
    assert Dual4.lift(Q(3)).partials == (0, 0, 0, 0)


def test_nested_duals_give_second_derivatives():
    # d²/da² of a³ at a = 2 is 12
    def f(p):
        return p[0] ** 3

    _, hess_row = exact_gradient(lambda q: exact_gradient(f, q)[1][0], (Q(2), Q(1), Q(1), Q(1)))
    assert hess_row[0] == 12


def test_is_zero_and_sign():
    assert is_zero(Q(0)) and not is_zero(Q(1, 10**30))
    assert is_zero(1e-15) and not is_zero(1e-13)
    assert (sign(Q(-2)), sign(0), sign(2.5)) == (-1, 0, 1)


@given(rationals(nonzero=False), rationals(nonzero=False), rationals(nonzero=False), rationals(nonzero=False))
def test_surd_arithmetic_matches_floats(r1, s1, r2, s2):
    x, y = Surd(r1, s1), Surd(r2, s2)
    assert math.isclose(float(x * y), float(x) * float(y), abs_tol=1e-9)
    assert math.isclose(float(x - y), float(x) - float(y), abs_tol=1e-9)
    if y != 0:
        assert (x / y) * y == x
    assert sign(x) == (float(x) > 0) - (float(x) < 0)


def test_surd_sqrt_half_squares_to_half():
    s = Surd(Q(0), Q(1, 2))
    assert s * s == Q(1, 2)
    assert str(s) == "1/2*sqrt(2)"
