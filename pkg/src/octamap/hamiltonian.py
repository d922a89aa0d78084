"""Symplectic form, Hamiltonian fields of F1, F2, G and linear-independence witnesses.

The form is

    ω = da∧db/(ab) + dc∧dd/(cd),

and the field of φ is ``X_φ = (-ab φ_b, ab φ_a, -cd φ_d, cd φ_c)``, so that
``ω(X_φ, V) = ∇φ·V``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from .invariants import F1, F2, G, f1_factors, f2_factors
from .maps import apply_word
from .octagon import g_ab, g_cd, gs_ab, gs_cd
from .polynomial import MPoly, prod, resultant_at, variables
from .sampling import random_point
from .scalar import DomainError, check_nonzero, exact_gradient, is_zero, jacobian

COORDS = "abcd"
PAIRS = tuple("".join(pr) for pr in combinations(COORDS, 2))


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), 0 * u[0])


def omega(p, u, v):
    a, b, c, d = p
    ab = check_nonzero(a * b, "ab")
    cd = check_nonzero(c * d, "cd")
    return (u[0] * v[1] - u[1] * v[0]) / ab + (u[2] * v[3] - u[3] * v[2]) / cd


def omega_mutant(p, u, v):
    """ω with the sign of its (c, d) block flipped; used for mutation testing."""
    a, b, c, d = p
    return (u[0] * v[1] - u[1] * v[0]) / (a * b) - (u[2] * v[3] - u[3] * v[2]) / (c * d)


def field_from_gradient(p, grad) -> tuple:
    a, b, c, d = p
    fa, fb, fc, fd = grad
    ab, cd = a * b, c * d
    return (-ab * fb, ab * fa, -cd * fd, cd * fc)


def hamiltonian_field(f: Callable, p) -> tuple:
    a, b, c, d = p
    check_nonzero(a * b * c * d, "abcd")
    _, grad = exact_gradient(f, p)
    return field_from_gradient(p, grad)


def X1(p):
    return hamiltonian_field(F1, p)


def X2(p):
    return hamiltonian_field(F2, p)


def XG(p):
    return tuple(y - x for x, y in zip(X1(p), X2(p)))


def _product_gradient(factors, grads):
    total = [0 * factors[0]] * 4
    for i, gi in enumerate(grads):
        rest = 1
        for j, f in enumerate(factors):
            if j != i:
                rest = rest * f
        total = [t + rest * x for t, x in zip(total, gi)]
    return total


def closed_form_fields(p) -> tuple:
    """(X1, X2) from hand-differentiated factors; no dual numbers, fast on floats."""
    a, b, c, d = p
    abcd = check_nonzero(a * b * c * d, "abcd")
    grads1 = ((1, -1, 0, 0), (0, 0, 1, -1), (c, d + 1, a - 1, b), (c - 1, d, a, b + 1))
    grads2 = ((-1, 1, 0, 0), (0, 0, -1, 1), (c, d - 1, a + 1, b), (c + 1, d, a, b - 1))
    inv = (1 / a, 1 / b, 1 / c, 1 / d)
    out = []
    for factors, grads in ((f1_factors(p), grads1), (f2_factors(p), grads2)):
        n = factors[0] * factors[1] * factors[2] * factors[3]
        gn = _product_gradient(factors, grads)
        grad = [(x - n * y) / abcd for x, y in zip(gn, inv)]
        out.append(field_from_gradient(p, grad))
    return tuple(out)


def poisson_bracket(p, form: Callable = omega):
    return form(p, X1(p), X2(p))


def _matvec(m, u):
    return tuple(dot(row, u) for row in m)


def pullback_holds(word, sign: int, p, u, v, form: Callable = omega) -> bool:
    img, jac = jacobian(lambda q: apply_word(word, q), p)
    return form(img, _matvec(jac, u), _matvec(jac, v)) == sign * form(p, u, v)


def pullback_check(word, sign: int, trials: int = 50, seed: int = 0, form: Callable = omega) -> bool:
    """Exact test of ``word^*(ω) = sign·ω`` at random rational points."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    good = attempts = 0
    while good < trials:
        if attempts >= 100 * trials:
            raise RuntimeError("map undefined at the sampled points")
        attempts += 1
        p = random_point(rng)
        u = random_point(rng, nonzero=False)
        v = random_point(rng, nonzero=False)
        try:
            ok = pullback_holds(word, sign, p, u, v, form)
        except (DomainError, ZeroDivisionError):
            continue
        if not ok:
            return False
        good += 1
    return True


def mu_vector(p) -> tuple:
    a, b, c, d = p
    alpha = 4 * a * b * (c + d) / check_nonzero((a - b + 1) * (-a + b + 1), "(a-b+1)(-a+b+1)")
    beta = 4 * c * d * (a + b) / check_nonzero((c - d + 1) * (-c + d + 1), "(c-d+1)(-c+d+1)")
    return (alpha, -alpha, -beta, beta)


def grad_h(p) -> tuple:
    """Gradient of log(ac/bd), written without the logarithm."""
    a, b, c, d = p
    return (1 / a, -1 / b, 1 / c, -1 / d)


def mir_identities(p) -> list:
    """``(name, lhs, rhs)`` for the five X_G directional-derivative identities."""
    a, b, c, d = p
    xg = XG(p)
    star = gs_ab(p) + gs_cd(p)
    ins = g_ab(p) + g_cd(p)
    ab_block = (1 - a + b) * (1 + a - b) * (a + b) / (a * b)
    cd_block = (1 - c + d) * (1 + c - d) * (c + d) / (c * d)
    return [
        ("XG.grad g*_ab", dot(xg, exact_gradient(gs_ab, p)[1]), 2 * star * ab_block),
        ("XG.grad g*_cd", dot(xg, exact_gradient(gs_cd, p)[1]), 2 * star * cd_block),
        ("XG.grad g_ab", dot(xg, exact_gradient(g_ab, p)[1]), -2 * ins * ab_block),
        ("XG.grad g_cd", dot(xg, exact_gradient(g_cd, p)[1]), -2 * ins * cd_block),
        (
            "XG.grad h",
            dot(xg, grad_h(p)),
            2 * star * ((1 + a * a + b * b) / (a * b) + (1 + c * c + d * d) / (c * d)),
        ),
    ]


def mir_identities_check(trials: int = 50, seed: int = 0) -> bool:
    rng = random.Random(seed)
    good = 0
    while good < trials:
        p = random_point(rng)
        try:
            rows = mir_identities(p)
        except (DomainError, ZeroDivisionError):
            continue
        if any(lhs != rhs for _, lhs, rhs in rows):
            return False
        good += 1
    return True


# -- linear-independence witnesses ------------------------------------------


@dataclass(frozen=True)
class WitnessPolys:
    """Numerators of du∧dv(X1, X2) and of X1·μ.

    ``f[uv]`` is the numerator with its monomial factor ``f_monomial[uv]``
    removed: ``du∧dv(X1,X2) = f[uv]·m/(abcd)^2`` with m the monomial.
    ``f_ab_reduced`` and ``g_reduced`` additionally drop the factors
    1±(a-b), 1±(c-d) (which cannot vanish on 𝒳) and integer content.
    """

    x1: tuple
    x2: tuple
    f: dict
    f_monomial: dict
    g: MPoly
    f_ab_reduced: MPoly
    g_reduced: MPoly


def _field_numerator(n: MPoly) -> tuple:
    """abcd·X_φ for φ = n/(abcd)."""
    a, b, c, d = variables(tuple(COORDS))
    return (
        -a * (b * n.diff("b") - n),
        b * (a * n.diff("a") - n),
        -c * (d * n.diff("d") - n),
        d * (c * n.diff("c") - n),
    )


@lru_cache(maxsize=1)
def witness_polys() -> WitnessPolys:
    a, b, c, d = variables(tuple(COORDS))
    pt = (a, b, c, d)
    x1 = _field_numerator(prod(f1_factors(pt)))
    x2 = _field_numerator(prod(f2_factors(pt)))
    f, mono = {}, {}
    for u, v in PAIRS:
        i, j = COORDS.index(u), COORDS.index(v)
        raw = x1[i] * x2[j] - x1[j] * x2[i]
        mono[u + v] = raw.monomial_content()
        f[u + v] = raw.strip_monomial()
    lin_ab = (a - b + 1) * (-a + b + 1)
    lin_cd = (c - d + 1) * (-c + d + 1)
    g_num = 4 * a * b * (c + d) * lin_cd * (x1[0] - x1[1]) + 4 * c * d * (a + b) * lin_ab * (x1[3] - x1[2])
    g = g_num.exact_div(lin_ab * lin_cd).strip_monomial()
    f_red = f["ab"].exact_div(lin_ab * lin_cd).primitive()
    return WitnessPolys(x1, x2, f, mono, g, f_red, g.primitive())


def _values(p) -> dict:
    return dict(zip(COORDS, p))


def dependence_witnesses(p) -> dict:
    """Values of the six f_uv and of g at p; all vanish where X1, X2 are dependent."""
    mu_vector(p)  # domain check
    w = witness_polys()
    vals = _values(p)
    out = {uv: w.f[uv].evaluate(vals) for uv in PAIRS}
    out["g"] = w.g.evaluate(vals)
    return out


def wedge(p, u: str, v: str):
    """du∧dv(X1, X2) evaluated directly from the fields."""
    x1, x2 = X1(p), X2(p)
    i, j = COORDS.index(u), COORDS.index(v)
    return x1[i] * x2[j] - x1[j] * x2[i]


def linearly_independent(p) -> bool:
    w = dependence_witnesses(p)
    return any(not is_zero(w[uv]) for uv in PAIRS)


def phi_polys() -> tuple:
    a, b, c, d = variables(tuple(COORDS))
    phi1 = b * c - c**2 + b * d + c * d
    phi2 = b - c + b * c - c**2 - b * d - c * d
    phi3 = phi2.subs({"a": -a, "b": -b, "c": -c, "d": -d})
    phi4 = 1 - c**2 + 2 * b * d + b**2 * c * d - b * c**2 * d + b**2 * d**2 + b * c * d**2
    return phi1, phi2, phi3, phi4


@lru_cache(maxsize=1)
def h_a_poly() -> MPoly:
    """(-1+b)(1+b)(b-c)(b-d)(c+d)^2 φ1 φ2^2 φ3^2 φ4."""
    a, b, c, d = variables(tuple(COORDS))
    phi1, phi2, phi3, phi4 = phi_polys()
    return (b - 1) * (b + 1) * (b - c) * (b - d) * (c + d) ** 2 * phi1 * phi2**2 * phi3**2 * phi4


# Monomial b^5 c^5 d^6 separating res(f_ab, g, a) from h_a; a unit on 𝒳.
H_A_MONOMIAL = (0, 5, 5, 6)


def h_e_value(e: str, point: dict, reduced: bool = True) -> Fraction:
    """res(f_ab, g, e) at a point of the other three coordinates."""
    w = witness_polys()
    if reduced:
        return resultant_at(w.f_ab_reduced, w.g_reduced, e, point)
    return resultant_at(w.f["ab"], w.g, e, point)


def h_a_ratio(point: dict, reduced: bool = True) -> Fraction:
    """res(f_ab, g, a) / (b^5 c^5 d^6 h_a) at a point (b, c, d)."""
    vals = dict(point, a=Fraction(0))
    mono = prod(vals[v] ** k for v, k in zip(COORDS, H_A_MONOMIAL))
    return h_e_value("a", point, reduced) / (mono * h_a_poly().evaluate(vals))


# h_e(p) = sign · h_a(p∘perm), up to the permuted monomial; signs found by evaluation.
H_E_PERMUTATIONS = {"a": "abcd", "b": "badc", "c": "cdab", "d": "dcba"}
H_E_SIGNS = {"a": 1, "b": 1, "c": -1, "d": -1}


def h_e_symmetry_ratio(e: str, point: dict) -> Fraction:
    """res(f_ab, g, e) / (h_a at the permuted point times its monomial).

    ``point`` holds the three coordinates other than ``e``.  Equals
    ``H_E_SIGNS[e]`` wherever both sides are defined and nonzero.
    """
    perm = H_E_PERMUTATIONS[e]
    vals = dict(point, **{e: Fraction(0)})
    moved = {"a": Fraction(0), "b": vals[perm[1]], "c": vals[perm[2]], "d": vals[perm[3]]}
    mono = prod(moved[v] ** k for v, k in zip(COORDS, H_A_MONOMIAL))
    return h_e_value(e, point) / (mono * h_a_poly().evaluate(moved))
