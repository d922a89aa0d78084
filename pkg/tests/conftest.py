import math
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from octamap.octagon import CanonCoords
from octamap.scalar import Surd

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

S = math.sqrt(0.5)
HALF_QUARTER = CanonCoords(Fraction(1, 2), Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
REGULAR_FLOAT = CanonCoords(S, S, S, S)
REGULAR_EXACT = CanonCoords(*([Surd(Fraction(0), Fraction(1, 2))] * 4))
SAMPLE_CONVEX = CanonCoords(0.9, 0.8, 0.9, 0.8)


def rationals(lo=-3, hi=3, max_den=60, nonzero=True):
    s = st.fractions(min_value=lo, max_value=hi, max_denominator=max_den)
    return s.filter(lambda x: x != 0) if nonzero else s


@st.composite
def points(draw, lo=-3, hi=3, nonzero=True):
    return CanonCoords(*(draw(rationals(lo, hi, nonzero=nonzero)) for _ in range(4)))


@st.composite
def vectors(draw):
    return tuple(draw(rationals(nonzero=False)) for _ in range(4))


@pytest.fixture
def half_quarter():
    return HALF_QUARTER


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[n])
