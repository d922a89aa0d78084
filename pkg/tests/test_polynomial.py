import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from octamap.invariants import F1, F2
from octamap.maps import gen_A
from octamap.polynomial import (
    MPoly,
    TermBudgetExceeded,
    bareiss_det,
    eliminate,
    format_poly,
    identity_check,
    nonzero_witness,
    parse_poly,
    resultant_at,
    sylvester_matrix,
    sylvester_resultant,
    variables,
)
from octamap.scalar import DomainError

x, y, t = variables("x y t")


def test_resultant_with_common_root_is_zero():
    assert sylvester_resultant(x**2 - 1, x**3 - 1) == 0


def test_resultant_linear_quadratic():
    assert sylvester_resultant(x - 2, x**2 - 1) == 3


def test_sylvester_layout():
    # P = x^2 + 2x + 3, Q = 4x + 5
    assert sylvester_matrix([3, 2, 1], [5, 4]) == [[1, 2, 3], [4, 5, 0], [0, 4, 5]]


def test_eliminate_circle_line():
    # x^2 + y^2 - 1 and x - y: eliminating y gives 2x^2 - 1
    r = eliminate(x**2 + y**2 - 1, x - y, "y")
    assert r == parse_poly("2*x^2 - 1", ("x", "t"))


def test_eliminate_parametric():
    # x = t^2, y = t^3 -> y^2 - x^3 up to sign
    r = eliminate(x - t**2, y - t**3, "t")
    target = parse_poly("y^2 - x^3", r.vars)
    assert r == target or r == -target


@given(rationals(), rationals())
def test_eliminate_agrees_with_resultant_at(xv, yv):
    P = x * t**2 + y * t + 1
    Q_ = t**2 - x * y * t + y
    full = eliminate(P, Q_, "t")
    try:
        spec = resultant_at(P, Q_, "t", {"x": xv, "y": yv})
    except DomainError:
        return
    assert full.evaluate({"x": xv, "y": yv}) == spec


def test_resultant_at_rejects_degree_drop():
    with pytest.raises(DomainError):
        resultant_at(x * t**2 + 1, t - y, "t", {"x": 0, "y": 1})


@given(rationals(), rationals(), rationals())
def test_resultant_is_bilinear_in_factors(r1, r2, r3):
    f1, f2, g = t - r1, t - r2, t - r3
    assert sylvester_resultant(f1 * f2, g, "t") == sylvester_resultant(f1, g, "t") * sylvester_resultant(f2, g, "t")


@given(st.lists(st.lists(rationals(nonzero=False), min_size=3, max_size=3), min_size=3, max_size=3))
def test_bareiss_matches_cofactor(m):
    cof = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    assert bareiss_det(m) == cof


def test_term_budget():
    a, b, c, d = variables("a b c d")
    p = (a + b + c + d + 1) ** 3
    with pytest.raises(TermBudgetExceeded):
        eliminate(p * t**3 + a * t + 1, b * t**3 + p * t**2 + c, "t", term_budget=5)


def test_nonzero_witness():
    rng = random.Random(0)
    found = nonzero_witness(x * t - 1, t - y, "t", rng)
    assert found is not None and found[1] != 0


@given(rationals(nonzero=False), rationals(nonzero=False), rationals(nonzero=False))
def test_format_parse_round_trip(c1, c2, c3):
    p = c1 * x**3 * y + c2 * y**2 + c3
    assert parse_poly(format_poly(p), p.vars) == p


def test_format_example():
    assert format_poly(parse_poly("x^2 - 3/2*x*y + 1")) == "x^2 - 3/2*x*y + 1"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_poly("x^^2")


def test_exact_division():
    p = (x + y) * (x - 2 * y)
    assert p.exact_div(x + y) == (x - 2 * y).with_vars(p.vars)


def test_identity_check_accepts_true_identity():
    assert identity_check(lambda p: (p[0] + p[1]) ** 2, lambda p: p[0] ** 2 + 2 * p[0] * p[1] + p[1] ** 2)


def test_identity_check_rejects_false_identity():
    # F1 is A-invariant, but F1∘A is not F2
    assert not identity_check(lambda p: F1(gen_A(p)), F2, trials=10, bound=50)


def test_identity_check_is_seeded():
    f = lambda p: p[0] * p[1]  # noqa: E731
    assert identity_check(f, f, seed=3) == identity_check(f, f, seed=3)
    with pytest.raises(ValueError):
        identity_check(f, f, trials=0)


def test_constant_evaluation():
    assert MPoly.const(Q(3, 4)).constant_value() == Q(3, 4)
