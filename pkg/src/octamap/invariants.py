"""The invariants F1, F2, G, H, factor bookkeeping and the set 𝒴."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .octagon import CanonCoords, defects, g_ab, g_cd, gs_ab, gs_cd, is_convex, vertices_from_coords
from .scalar import FLOAT_ZERO, DomainError, check_nonzero, fmt_rat, is_zero, sign

# Frozen order of the factors whose signs define 𝒳 and 𝒳₊.
FACTOR_NAMES = (
    "1+a-b",
    "1+c-d",
    "e+b-c",
    "e+d-a",
    "1-a+b",
    "1-c+d",
    "e-b+c",
    "e-d+a",
    "g_ab+g_cd",
    "g*_ab+g*_cd",
    "ab",
    "cd",
)

Y_TOL = 1e-10


def e_of(p):
    a, b, c, d = p
    return a * c + b * d


def f1_factors(p) -> tuple:
    a, b, c, d = p
    e = e_of(p)
    return (1 + a - b, 1 + c - d, e + b - c, e + d - a)


def f2_factors(p) -> tuple:
    a, b, c, d = p
    e = e_of(p)
    return (1 - a + b, 1 - c + d, e - b + c, e - d + a)


def _over_abcd(factors, p):
    a, b, c, d = p
    num = factors[0] * factors[1] * factors[2] * factors[3]
    return num / check_nonzero(a * b * c * d, "abcd")


def F1(p):
    return _over_abcd(f1_factors(p), p)


def F2(p):
    return _over_abcd(f2_factors(p), p)


def G(p):
    return F2(p) - F1(p)


def G_factored(p):
    """The same G written as 2(g_ab+g_cd)(g*_ab+g*_cd)."""
    return 2 * (g_ab(p) + g_cd(p)) * (gs_ab(p) + gs_cd(p))


def H(p):
    f2 = F2(p)
    return F1(p) / check_nonzero(f2, "F2")


def factor_values(p) -> tuple:
    a, b, c, d = p
    ins, circ = defects(p)
    return f1_factors(p) + f2_factors(p) + (ins, circ, a * b, c * d)


@dataclass(frozen=True)
class InvariantReport:
    F1: object
    F2: object
    G: object
    H: object
    e: object
    factor_signs: tuple

    def to_json(self) -> dict:
        return {
            "F1": fmt_rat(self.F1),
            "F2": fmt_rat(self.F2),
            "G": fmt_rat(self.G),
            "H": None if self.H is None else fmt_rat(self.H),
            "e": fmt_rat(self.e),
            "factor_signs": dict(zip(FACTOR_NAMES, self.factor_signs)),
        }


def invariant_report(p: Sequence) -> InvariantReport:
    f1, f2 = F1(p), F2(p)
    g = f2 - f1
    if not is_zero(g - G_factored(p), 1e-9 * (1 + abs(float(g)))):
        raise ArithmeticError("G = F2 - F1 failed to match its factored form")
    h = None if is_zero(f2) else f1 / f2
    return InvariantReport(f1, f2, g, h, e_of(p), tuple(sign(x) for x in factor_values(p)))


@dataclass(frozen=True)
class Membership:
    in_X: bool
    in_X_plus: bool
    component: tuple | None


def component_of(p) -> tuple | None:
    """Sign pair (inscribed, circumscribed) for convex points off both defect loci."""
    if not is_convex(vertices_from_coords(p)):
        return None
    ins, circ = defects(p)
    if is_zero(ins) or is_zero(circ):
        return None
    return sign(ins), sign(circ)


def membership(p: Sequence) -> Membership:
    a, b, c, d = p
    check_nonzero(a * b * c * d, "abcd")
    signs = [sign(x) if not is_zero(x) else 0 for x in factor_values(p)]
    return Membership(all(s != 0 for s in signs), all(s == 1 for s in signs), component_of(p))


def in_X_plus(p) -> bool:
    try:
        return membership(p).in_X_plus
    except DomainError:
        return False


def y_polynomial(f1, f2):
    s = f1 + f2
    return 512 + 216 * f1 * f2 + 192 * s - 30 * s * s + s * s * s


def y_equations(p) -> tuple:
    a, b, c, d = p
    return a * c + b * d + 1, a * c * c + c * a * a + b * d * d + d * b * b


def in_y_set(p: Sequence, tol: float = Y_TOL) -> bool:
    return all(is_zero(v, tol) for v in y_equations(p))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def y_point(a, c, exact: bool = True) -> CanonCoords:
    """A point of 𝒴 with prescribed a, c.

    Solves bd = -(1+ac), b+d = ac(a+c)/(1+ac). In exact mode the discriminant
    must be a rational square, otherwise ValueError is raised.
    """
    one_ac = 1 + a * c
    if is_zero(one_ac, FLOAT_ZERO):
        raise DomainError("1+ac")
    prod = -one_ac
    s = a * c * (a + c) / one_ac
    disc = s * s - 4 * prod
    if exact:
        root = _rational_sqrt(Fraction(disc))
        if root is None:
            raise ValueError(f"discriminant {disc} is not a rational square")
    else:
        if disc < 0:
            raise ValueError("complex 𝒴 point")
        root = math.sqrt(float(disc))
    b = (s + root) / 2
    d = (s - root) / 2
    return CanonCoords(a, b, c, d)


def rational_y_points(count: int, seed: int = 0, bound: int = 12) -> list:
    """Search small rationals (a, c) for exact 𝒴 points with abcd != 0."""
    rng = random.Random(seed)
    out, seen = [CanonCoords(Fraction(1), Fraction(1, 2), Fraction(-1, 2), Fraction(-1))], set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200000:
            raise RuntimeError("could not find enough rational 𝒴 points")
        a = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        c = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if a == 0 or c == 0 or (a, c) in seen or 1 + a * c == 0:
            continue
        seen.add((a, c))
        try:
            p = y_point(a, c)
        except ValueError:
            continue
        if p.b != 0 and p.d != 0:
            out.append(p)
    return out
