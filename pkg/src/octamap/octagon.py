"""Centrally symmetric octagons and their canonical coordinates.

An affine class is represented by ``p = (a, b, c, d)``, standing for the
octagon with vertices

    (1,0), (a,b), (0,1), (-d,c), (-1,0), (-a,-b), (0,-1), (d,-c).

All functions are generic over the scalar type (Fraction or float).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .scalar import DomainError, Surd, check_nonzero, fmt_rat, is_zero, parse_scalar, sign

SYMMETRY_TOL = 1e-9
PARALLEL_TOL = 1e-12

# Vertex j of a star-reordered octagon is vertex STAR_STEP*j of the input.
STAR_STEP = 3

# Index shift aligning geometric_T3 with the AΔAΔ formula (found empirically).
T3_INDEX_SHIFT = 0


class CanonCoords(NamedTuple):
    a: object
    b: object
    c: object
    d: object

    @classmethod
    def parse(cls, text: str, exact: bool = True) -> "CanonCoords":
        parts = [s for s in text.replace(";", ",").split(",") if s.strip()]
        if len(parts) != 4:
            raise ValueError(f"expected 4 coordinates, got {len(parts)}: {text!r}")
        return cls(*(parse_scalar(s, exact) for s in parts))

    def to_float(self) -> "CanonCoords":
        return CanonCoords(*(float(x) for x in self))

    def format(self) -> str:
        return ",".join(fmt_rat(x) for x in self)


@dataclass(frozen=True)
class Octagon:
    """Eight plane vertices ``v0..v7`` with ``v_{i+4} = -v_i``."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(tuple(v) for v in self.vertices)
        if len(vs) != 8 or any(len(v) != 2 for v in vs):
            raise ValueError("an octagon needs 8 plane vertices")
        object.__setattr__(self, "vertices", vs)

    def __getitem__(self, i: int):
        return self.vertices[i % 8]

    def symmetry_defect(self) -> float:
        return max(
            max(abs(float(self[i][0] + self[i + 4][0])), abs(float(self[i][1] + self[i + 4][1])))
            for i in range(4)
        )

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        for i in range(4):
            for k in range(2):
                s = self[i][k] + self[i + 4][k]
                if isinstance(s, (Fraction, int, Surd)):
                    if s != 0:
                        return False
                elif abs(s) > tol:
                    return False
        return True

    def relabel(self, perm: Sequence[int]) -> "Octagon":
        return Octagon(tuple(self[j] for j in perm))


def vertices_from_coords(p: Sequence) -> Octagon:
    a, b, c, d = p
    one, zero = a ** 0, a * 0
    half = ((one, zero), (a, b), (zero, one), (-d, c))
    return Octagon(half + tuple((-x, -y) for x, y in half))


def normalize(o: Octagon, tol: float = SYMMETRY_TOL) -> CanonCoords:
    """Canonical coordinates of ``o`` via the linear map v0 -> (1,0), v2 -> (0,1)."""
    if not o.is_symmetric(tol):
        raise ValueError(f"octagon is not centrally symmetric (defect {o.symmetry_defect():.3g})")
    (x0, y0), (x2, y2) = o[0], o[2]
    det = x0 * y2 - x2 * y0
    if is_zero(det):
        raise DomainError("det(v0,v2)", "v0 and v2 are collinear with the origin")

    def image(v):
        x, y = v
        return (y2 * x - x2 * y) / det, (-y0 * x + x0 * y) / det

    a, b = image(o[1])
    u, c = image(o[3])
    return CanonCoords(a, b, c, -u)


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def turn_signs(o: Octagon) -> list:
    """Signs of the cross products of consecutive edge vectors."""
    out = []
    for i in range(8):
        e1 = (o[i + 1][0] - o[i][0], o[i + 1][1] - o[i][1])
        e2 = (o[i + 2][0] - o[i + 1][0], o[i + 2][1] - o[i + 1][1])
        out.append(sign(cross(e1, e2)))
    return out


def is_convex(o: Octagon) -> bool:
    s = turn_signs(o)
    return all(x == 1 for x in s) or all(x == -1 for x in s)


def convex_constraints(p: Sequence) -> bool:
    a, b, c, d = p
    return (
        min(a, b, c, d) > 0
        and abs(a - b) < 1
        and abs(c - d) < 1
        and a + b > 1
        and c + d > 1
    )


def g_ab(p):
    a, b = p[0], p[1]
    return (1 - a * a - b * b) / check_nonzero(a * b, "ab")


def g_cd(p):
    c, d = p[2], p[3]
    return (1 - c * c - d * d) / check_nonzero(c * d, "cd")


def gs_ab(p):
    return p[0] - p[1]


def gs_cd(p):
    return p[2] - p[3]


def defects(p: Sequence) -> tuple:
    """``(g_ab + g_cd, g*_ab + g*_cd)``: zero iff inscribed / circumscribed."""
    return g_ab(p) + g_cd(p), gs_ab(p) + gs_cd(p)


def star_reorder(o: Octagon) -> Octagon:
    return o.relabel([(STAR_STEP * j) % 8 for j in range(8)])


def dihedral_relabelings():
    """The 16 index maps j -> ±j + r (mod 8)."""
    for r in range(8):
        yield [(r + j) % 8 for j in range(8)]
        yield [(r - j) % 8 for j in range(8)]


def line_through(p, q):
    """Homogeneous line through two affine points."""
    return (p[1] - q[1], q[0] - p[0], p[0] * q[1] - p[1] * q[0])


def meet(l1, l2, tol: float = PARALLEL_TOL):
    x = l1[1] * l2[2] - l1[2] * l2[1]
    y = l1[2] * l2[0] - l1[0] * l2[2]
    w = l1[0] * l2[1] - l1[1] * l2[0]
    if is_zero(w, tol):
        raise DomainError("w", "diagonals are parallel")
    return x / w, y / w


def geometric_T3(o: Octagon) -> Octagon:
    """v'_k = v_{k+1}v_{k+4} ∩ v_{k+2}v_{k+5}, indices mod 8."""
    out = []
    for k in range(8):
        j = k + T3_INDEX_SHIFT
        out.append(meet(line_through(o[j + 1], o[j + 4]), line_through(o[j + 2], o[j + 5])))
    return Octagon(tuple(out))


# JSON I/O -----------------------------------------------------------------


def _scalar_json(x):
    return fmt_rat(x) if isinstance(x, (Fraction, int)) else float(x)


def _scalar_from_json(x, exact: bool):
    if isinstance(x, str):
        return parse_scalar(x, exact)
    if exact and isinstance(x, int):
        return Fraction(x)
    if exact:
        raise ValueError("exact backend needs fraction strings, got a JSON number")
    return float(x)


def coords_to_json(p: Sequence) -> dict:
    return {"coords": dict(zip("abcd", (_scalar_json(x) for x in p)))}


def octagon_to_json(o: Octagon) -> dict:
    return {"vertices": [[_scalar_json(x), _scalar_json(y)] for x, y in o.vertices]}


def load_json(data, exact: bool = True):
    """Parse ``{"coords": ...}`` into CanonCoords or ``{"vertices": ...}`` into an Octagon."""
    if isinstance(data, str):
        data = json.loads(data)
    if "coords" in data:
        c = data["coords"]
        return CanonCoords(*(_scalar_from_json(c[k], exact) for k in "abcd"))
    if "vertices" in data:
        return Octagon(tuple((_scalar_from_json(x, exact), _scalar_from_json(y, exact)) for x, y in data["vertices"]))
    raise ValueError("JSON must contain 'coords' or 'vertices'")
