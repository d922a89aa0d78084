"""The circumscribed foliation: planes Π_k, the function h and Poncelet fixed points.

A circumscribed point ``(a, b, c, d)`` (``a - b + c - d = 0``) lies on the
plane ``Π_k = {(x+k, x-k, y-k, y+k)}``.  On Π_k the function

    h = -g_ab(AΔ p) = (4k³ - x + y - 4kxy) / ((k - x)(k + y))

is T3⁴-invariant, and T3⁴ acts on each level curve L(k, ℓ) as a hyperbolic
linear fractional map whose fixed points are Poncelet octagons.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .maps import T3_WORD, GenWord, apply_word, gen_A, gen_D
from .octagon import (
    CanonCoords,
    Octagon,
    convex_constraints,
    defects,
    dihedral_relabelings,
    g_ab,
    is_convex,
    normalize,
    star_reorder,
    vertices_from_coords,
)
from .sampling import random_rat
from .scalar import DomainError, check_nonzero, is_zero, jacobian

T3_4 = GenWord(T3_WORD.letters * 4)
T3_4_INV = T3_4.inverse()

CONVERGE_TOL = 1e-10
CONVERGE_MAX_ITER = 200
CLASS_TOL = 1e-8
MP_DPS = 50


class PlanePoint(NamedTuple):
    k: object
    x: object
    y: object


@dataclass(frozen=True)
class LFTLevel:
    k: object
    ell: object

    def in_K(self) -> bool:
        """Whether L(k, ℓ) contains convex points."""
        return abs(self.k) < 0.5 and abs(self.ell) < 2

    @classmethod
    def of(cls, p) -> "LFTLevel":
        q = plane_project(p)
        return cls(q.k, h_level(q))


def plane_embed(q: PlanePoint) -> CanonCoords:
    k, x, y = q
    return CanonCoords(x + k, x - k, y - k, y + k)


def plane_project(p) -> PlanePoint:
    a, b, c, d = p
    if not is_zero(a - b + c - d):
        raise ValueError("point is not circumscribed (a - b + c - d != 0)")
    return PlanePoint((a - b) / 2, (a + b) / 2, (c + d) / 2)


def h_level(q: PlanePoint):
    k, x, y = q
    den = check_nonzero((k - x) * (k + y), "(k-x)(k+y)")
    return (4 * k**3 - x + y - 4 * k * x * y) / den


def h_of(p):
    """-g_ab(AΔ p); agrees with :func:`h_level` on every Π_k."""
    return -g_ab(gen_A(gen_D(p)))


def psi_parts(p) -> tuple:
    """Real and imaginary parts of ψ(a,b,c,d) = h(a,b,c,d) + i h(b,a,d,c)."""
    a, b, c, d = p
    return h_of(p), h_of((b, a, d, c))


def psi(p) -> complex:
    re, im = psi_parts(p)
    return complex(float(re), float(im))


def rotation_holds(p) -> bool:
    """ψ(T3 p) = -i ψ(p), compared part by part."""
    re, im = psi_parts(p)
    re2, im2 = psi_parts(apply_word(T3_WORD, p))
    return is_zero(re2 - im) and is_zero(im2 + re)


def level_curve_quadratic(q: PlanePoint, ell):
    """Numerator of h - ℓ: (ℓ-4k)xy + (kℓ-1)x + (1-kℓ)y + 4k³ - k²ℓ."""
    k, x, y = q
    return (ell - 4 * k) * x * y + (k * ell - 1) * x + (1 - k * ell) * y + 4 * k**3 - k**2 * ell


def level_curve_quadratic_stated(q: PlanePoint, ell):
    """The printed form (ℓ-4k)xy + (1+kℓ)x - (1+kℓ)y - (4k³-k²ℓ); kept for comparison."""
    k, x, y = q
    return (ell - 4 * k) * x * y + (1 + k * ell) * x - (1 + k * ell) * y - (4 * k**3 - k**2 * ell)


# -- fixed points -------------------------------------------------------------


def discriminant(level: LFTLevel):
    k, l = level.k, level.ell
    return 4 * (1 + 4 * k**2 - 2 * k * l) * ((8 - l**2) - 8 * k * l + 4 * (k * l) ** 2)


def sum_product(level: LFTLevel) -> tuple:
    """(x0 + y0, x0·y0) for the quadratic whose roots give the fixed points."""
    k, l = level.k, level.ell
    den = check_nonzero((2 + l) * (2 - l), "(2+l)(2-l)")
    return (
        2 * (4 * k - l) * (k * l - 1) / den,
        (-2 - 4 * k**2 + 4 * k * l - k**2 * l**2) / den,
    )


def sum_product_stated(level: LFTLevel) -> tuple:
    """As printed, with -4k in place of -4k² in the product."""
    k, l = level.k, level.ell
    s, _ = sum_product(level)
    return s, (-2 - 4 * k + 4 * k * l - k**2 * l**2) / ((2 + l) * (2 - l))


def tangent(q: PlanePoint) -> tuple:
    """Tangent of the level curve of h through q, as a vector in (a,b,c,d)."""
    k, x, y = q
    ell = h_level(q)
    # gradient of the level numerator, parallel to grad h on the curve
    gx = (ell - 4 * k) * y + (k * ell - 1)
    gy = (ell - 4 * k) * x + (1 - k * ell)
    tx, ty = -gy, gx
    return (tx, tx, ty, ty)


def multiplier(p, word: GenWord = T3_4) -> float:
    """Derivative of ``word`` along the level curve at a fixed point p."""
    img, jac = jacobian(lambda z: apply_word(word, z), p)
    t = tangent(plane_project(p))
    jt = [sum(r * v for r, v in zip(row, t)) for row in jac]
    return float(sum(u * v for u, v in zip(t, jt)) / sum(v * v for v in t))


SWEEP_HEADER = ("k", "ell", "D", "x0", "y0", "multiplier")


@dataclass(frozen=True)
class FixedPoints:
    level: LFTLevel
    attractor: CanonCoords
    repeller: CanonCoords
    D: float
    x0: float
    y0: float
    multiplier: float
    repeller_multiplier: float

    def to_row(self) -> dict:
        return {
            "k": float(self.level.k),
            "ell": float(self.level.ell),
            "D": float(self.D),
            "x0": self.x0,
            "y0": self.y0,
            "multiplier": self.multiplier,
        }


def fixed_points(level: LFTLevel, dps: int = MP_DPS) -> FixedPoints:
    """The two Poncelet fixed points of T3⁴ on L(k, ℓ); attractor by multiplier.

    Roots and multipliers are computed at ``dps`` digits: T3⁴ expands
    directions off Π_k so strongly that double precision loses the multiplier
    near the edge of 𝒦.
    """
    if not level.in_K():
        raise ValueError(f"(k, ell) = ({level.k}, {level.ell}) is outside |k| < 1/2, |ell| < 2")
    D = discriminant(level)
    if D <= 0:
        raise ArithmeticError(f"discriminant D = {D} <= 0 inside K")
    with mpmath.workdps(dps):
        k, ell = _mpf(level.k), _mpf(level.ell)
        s, prod = sum_product(LFTLevel(k, ell))
        r = mpmath.sqrt(s * s - 4 * prod)
        u, v = (s + r) / 2, (s - r) / 2
        cands = [plane_embed(PlanePoint(k, u, -v)), plane_embed(PlanePoint(k, v, -u))]
        mults = [multiplier(p) for p in cands]
        i = 0 if abs(mults[0]) < abs(mults[1]) else 1
        x0, y0 = (u, v) if i == 0 else (v, u)
        att, rep = (CanonCoords(*(float(t) for t in p)) for p in (cands[i], cands[1 - i]))
        return FixedPoints(level, att, rep, D, float(x0), float(y0), mults[i], mults[1 - i])


def _mpf(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)


@dataclass(frozen=True)
class LFTClass:
    type: str
    multiplier: float
    repeller_multiplier: float


def classify_lft(level: LFTLevel, tol: float = 1e-6) -> LFTClass:
    fp = fixed_points(level)
    lam, mu = fp.multiplier, fp.repeller_multiplier
    kind = "hyperbolic" if abs(abs(lam) - 1) > tol else "elliptic"
    return LFTClass(kind, lam, mu)


def is_poncelet(p, tol: float = 1e-10) -> bool:
    ins, circ = defects(p)
    return is_zero(ins, tol) and is_zero(circ, tol)


# -- relabelings ----------------------------------------------------------------


def _dist(p, q) -> float:
    return max(abs(float(x) - float(y)) for x, y in zip(p, q))


def same_class(o1: Octagon, o2: Octagon, tol: float = CLASS_TOL) -> bool:
    """Affine classes agree after some dihedral relabeling of ``o2``."""
    p1 = normalize(o1)
    for perm in dihedral_relabelings():
        try:
            if _dist(p1, normalize(o2.relabel(perm))) < tol:
                return True
        except (DomainError, ValueError):
            continue
    return False


def repeller_is_star_reorder(fp: FixedPoints, tol: float = CLASS_TOL) -> bool:
    att = vertices_from_coords(fp.attractor)
    return same_class(vertices_from_coords(fp.repeller), star_reorder(att), tol)


def antipodal_swap(p) -> CanonCoords:
    """(a, b, c, d) -> -(c, d, a, b)."""
    a, b, c, d = p
    return CanonCoords(-c, -d, -a, -b)


# -- convergence ----------------------------------------------------------------


class Convergence(NamedTuple):
    limit: CanonCoords
    iterations: int
    converged: bool
    opposite_exit: int | None


def retract(p) -> CanonCoords:
    """Orthogonal projection onto the circumscribed hyperplane a - b + c - d = 0.

    The hyperplane is invariant but transversally repelling under T3, so float
    iterates must be pulled back onto it after every step.
    """
    a, b, c, d = p
    s = (a - b + c - d) / 4
    return CanonCoords(a - s, b + s, c - s, d + s)


def to_plane(p, k) -> CanonCoords:
    """Re-embed p into Π_k, keeping its (x, y) plane coordinates."""
    a, b, c, d = p
    return plane_embed(PlanePoint(k, (a + b) / 2, (c + d) / 2))


def convexity_exit(p, direction: int, max_steps: int) -> int | None:
    """First j ≤ max_steps with T3^(direction·j)(p) non-convex or undefined."""
    word = T3_WORD if direction > 0 else T3_WORD.inverse()
    q = p
    for j in range(1, max_steps + 1):
        try:
            q = retract(apply_word(word, q))
        except DomainError:
            return j
        if not is_convex(vertices_from_coords(q)):
            return j
    return None


def converge_to_poncelet(
    p,
    direction: int = 1,
    max_iter: int = CONVERGE_MAX_ITER,
    tol: float = CONVERGE_TOL,
) -> Convergence:
    """Iterate T3^(4·direction) on Π_k until successive iterates are within ``tol``.

    Each float iterate is re-embedded into the starting plane Π_k, which
    T3⁴ preserves.  Domain errors are re-raised with the iteration index.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    word = T3_4 if direction == 1 else T3_4_INV
    k = float(plane_project(p).k)
    q = CanonCoords(*(float(x) for x in p))
    exit_at = convexity_exit(q, -direction, 4 * max_iter)
    for n in range(max_iter + 1):
        try:
            nxt = to_plane(apply_word(word, q), k)
        except DomainError as exc:
            raise DomainError(exc.factor, f"iteration {n + 1}: {exc}") from exc
        if _dist(nxt, q) < tol:
            return Convergence(q, n, True, exit_at)
        q = nxt
    return Convergence(q, max_iter, False, exit_at)


def sweep(ks: Sequence, ells: Sequence) -> list:
    """Fixed-point rows over a (k, ℓ) grid; levels outside 𝒦 are skipped."""
    rows = []
    for k in ks:
        for l in ells:
            level = LFTLevel(k, l)
            if level.in_K():
                rows.append(fixed_points(level).to_row())
    return rows


def grid(n: int, margin: float = 0.02) -> tuple:
    """n evenly spaced k in (-1/2, 1/2) and ℓ in (-2, 2)."""
    ks = [-0.5 + margin + (1 - 2 * margin) * i / (n - 1) for i in range(n)]
    ells = [-2 + 4 * margin + (4 - 8 * margin) * i / (n - 1) for i in range(n)]
    return ks, ells


def convex_circumscribed_point(rng, level_k=None, max_den: int = 200):
    """Random convex circumscribed rational point, optionally on a given Π_k."""
    while True:
        k = level_k if level_k is not None else random_rat(rng, -0.49, 0.49, max_den)
        x = random_rat(rng, 0.5, 2, max_den)
        y = random_rat(rng, 0.5, 2, max_den)
        p = plane_embed(PlanePoint(k, x, y))
        if convex_constraints(p) and is_convex(vertices_from_coords(p)):
            return p
