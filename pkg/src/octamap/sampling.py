"""Seeded random points for experiments and randomized identity checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .invariants import in_X_plus
from .octagon import CanonCoords, convex_constraints, is_convex, vertices_from_coords

MAX_DEN = 60


def random_rat(rng: random.Random, lo, hi, max_den: int = MAX_DEN) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(int(lo * den), int(hi * den)), den)


def random_point(rng: random.Random, box=3, max_den: int = MAX_DEN, nonzero: bool = True) -> CanonCoords:
    """Rational point of [-box, box]^4, by default with no zero coordinate."""
    while True:
        p = CanonCoords(*(random_rat(rng, -box, box, max_den) for _ in range(4)))
        if not nonzero or all(p):
            return p


def random_box_point(rng: random.Random, lo=0, hi=2, max_den: int = 1000) -> CanonCoords:
    return CanonCoords(*(random_rat(rng, lo, hi, max_den) for _ in range(4)))


def random_convex_point(rng: random.Random, max_den: int = 1000, exact: bool = True) -> CanonCoords:
    """Rejection sample of (0,2)^4 restricted to convex octagons."""
    while True:
        p = random_box_point(rng, 0, 2, max_den)
        if convex_constraints(p) and is_convex(vertices_from_coords(p)):
            return p if exact else p.to_float()


def random_x_plus_point(rng: random.Random, max_den: int = 1000) -> CanonCoords:
    """Rational point with all twelve 𝒳₊ factors positive."""
    while True:
        p = random_box_point(rng, 0, 2, max_den)
        if all(p) and in_X_plus(p):
            return p


def random_u_ab_point(rng: random.Random, max_den: int = 200) -> CanonCoords:
    """Point (a, 1-a, c, d) with a in (0,1), c, d > 0 and c + d < 1."""
    while True:
        a = random_rat(rng, 0, 1, max_den)
        c = random_rat(rng, 0, 1, max_den)
        d = random_rat(rng, 0, 1, max_den)
        if 0 < a < 1 and c > 0 and d > 0 and c + d < 1:
            return CanonCoords(a, 1 - a, c, d)
