"""Hamiltonian flows on level sets, the slice 𝒰, nice loops and reversal formulas.

Float work uses scipy's Dormand-Prince RK45 stepper; closed-form identities
(nice-loop polynomial, concavity, reversal Jacobians) stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq

from .hamiltonian import X1, X2, XG, closed_form_fields, dot
from .invariants import F1, F2, G, H, f1_factors, f2_factors, membership
from .maps import IOTA3, IOTA5, apply_word
from .octagon import CanonCoords
from .polynomial import MPoly, variables
from .scalar import DomainError, exact_gradient, jacobian

HYPERPLANE_GUARD = 1e-10
DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-13
DRIFT_TOL = 1e-9
EVENT_TOL = 1e-12

G_FIELD = (-1, 1)  # X_G = X2 - X1


@dataclass(frozen=True)
class LevelSpec:
    """A level set, stored as (F1, F2); (g, h) = (F2 - F1, F1/F2)."""

    F1: object
    F2: object

    @classmethod
    def from_gh(cls, g, h) -> "LevelSpec":
        f2 = g / (1 - h)
        return cls(h * f2, f2)

    @property
    def g(self):
        return self.F2 - self.F1

    @property
    def h(self):
        return self.F1 / self.F2


def _field_coeffs(spec) -> tuple:
    if spec == "G":
        return G_FIELD
    a1, a2 = spec
    return a1, a2


def field_vector(p, spec="G") -> tuple:
    a1, a2 = _field_coeffs(spec)
    x1, x2 = closed_form_fields(p)
    return tuple(a1 * u + a2 * v for u, v in zip(x1, x2))


@dataclass
class Trajectory:
    times: np.ndarray
    samples: np.ndarray
    field: tuple
    drift: float
    status: str = "ok"
    reason: str = ""
    tol: float = DRIFT_TOL
    segments: list = field(default_factory=list, repr=False)

    @property
    def accepted(self) -> bool:
        return self.drift <= self.tol and self.status in ("ok", "guard")

    @property
    def end(self) -> CanonCoords:
        return CanonCoords(*map(float, self.samples[-1]))

    def at(self, t: float) -> np.ndarray:
        """Dense-output state at time t (within the integrated range)."""
        if len(self.times) == 1:
            return self.samples[0]
        for t0, t1, interp in self.segments:
            if min(t0, t1) <= t <= max(t0, t1):
                return interp(t)
        raise ValueError(f"t = {t} outside integrated range")

    def raise_for_status(self):
        if self.status not in ("ok", "guard"):
            raise RuntimeError(f"integration {self.status}: {self.reason} (last state {self.end})")
        return self


def level_values(y) -> tuple:
    return float(F1(y)), float(F2(y))


def project_to_level(y: np.ndarray, level: tuple, iterations: int = 3) -> np.ndarray:
    """Minimal-norm Newton correction of y onto {F1, F2} = level."""
    for _ in range(iterations):
        x1, x2 = closed_form_fields(tuple(y))
        # recover gradients: X = (-ab F_b, ab F_a, -cd F_d, cd F_c)
        a, b, c, d = y
        rows = []
        for x in (x1, x2):
            rows.append([x[1] / (a * b), -x[0] / (a * b), x[3] / (c * d), -x[2] / (c * d)])
        jac = np.array(rows)
        res = np.array(level_values(y)) - np.array(level)
        y = y - jac.T @ np.linalg.solve(jac @ jac.T, res)
    return y


def integrate(
    p0,
    field="G",
    t_end: float = 1.0,
    tol: float = DRIFT_TOL,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    guard: float = HYPERPLANE_GUARD,
    project: bool = False,
    max_steps: int = 200000,
) -> Trajectory:
    """Integrate α1 X1 + α2 X2 (or X_G) from p0 for time t_end (may be negative).

    Stops early, with status "guard", when a coordinate comes within ``guard``
    of zero, and with status "underflow" when the step size collapses.
    """
    coeffs = _field_coeffs(field)
    if not membership(p0).in_X:
        raise ValueError("starting point is not in 𝒳")
    y0 = np.array([float(x) for x in p0])
    level = level_values(y0)
    if t_end == 0:
        return Trajectory(np.array([0.0]), y0[None, :], coeffs, 0.0, tol=tol)

    def rhs(_t, y):
        return np.array(field_vector(tuple(y), coeffs))

    solver = RK45(rhs, 0.0, y0, t_end, rtol=rtol, atol=atol)
    times, states, segments = [0.0], [y0], []
    status, reason = "ok", ""
    while solver.status == "running":
        if len(times) > max_steps:
            status, reason = "maxsteps", f"more than {max_steps} steps"
            break
        try:
            msg = solver.step()
        except (ZeroDivisionError, DomainError) as exc:
            status, reason = "guard", f"field singular near a coordinate hyperplane: {exc}"
            break
        if solver.status == "failed":
            status, reason = "underflow", str(msg)
            break
        y = solver.y
        if not np.all(np.isfinite(y)):
            status, reason = "underflow", "non-finite state"
            break
        if project:
            y = project_to_level(y, level)
            solver.y = y
            solver.f = rhs(solver.t, y)
        else:
            segments.append((solver.t_old, solver.t, solver.dense_output()))
        if np.any(np.sign(y) != np.sign(states[-1])):
            # stepped across a hyperplane where the field is singular
            segments = segments[:-1]
            status, reason = "guard", f"coordinate hyperplane crossed near t={solver.t:.6g}"
            break
        times.append(solver.t)
        states.append(np.array(y))
        if np.min(np.abs(y)) < guard:
            status, reason = "guard", f"coordinate hyperplane approached at t={solver.t:.6g}"
            break
    samples = np.array(states)
    vals = np.array([level_values(y) for y in samples])
    drift = float(np.max(np.abs(vals - vals[0]).sum(axis=1)))
    return Trajectory(np.array(times), samples, coeffs, drift, status, reason, tol, segments)


# -- the slice 𝒰 --------------------------------------------------------------


def u_event(y) -> float:
    return max(y[0] + y[1], y[2] + y[3]) - 1


def u_crossings(traj: Trajectory, tol: float = EVENT_TOL) -> list:
    """Times where max(a+b, c+d) = 1 along a trajectory, refined on dense output."""
    out = []
    vals = [u_event(y) for y in traj.samples]
    for i in range(len(vals) - 1):
        if vals[i] == 0:
            out.append(float(traj.times[i]))
        elif vals[i] * vals[i + 1] < 0:
            t0, t1 = traj.times[i], traj.times[i + 1]
            out.append(brentq(lambda t: u_event(traj.at(t)), t0, t1, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return out


@dataclass(frozen=True)
class UCrossing:
    point: CanonCoords
    time: float
    event: float


def find_U_crossing(p0, t_max: float = 50.0, rtol: float = DEFAULT_RTOL) -> UCrossing:
    """Flow X_G forward, then backward, until the G-curve meets 𝒰."""
    for direction in (1, -1):
        traj = integrate(p0, "G", direction * t_max, tol=math.inf, rtol=rtol)
        hits = u_crossings(traj)
        if hits:
            t = hits[0]
            y = traj.at(t)
            return UCrossing(CanonCoords(*map(float, y)), t, u_event(y))
    raise RuntimeError("no 𝒰 crossing found in either direction")


# -- nice loops -----------------------------------------------------------------


def gamma0(c, g, h):
    return 16 * c - 16 * c * c - g + c * g - 16 * c * h + 16 * c * c * h - c * g * h


def nice_loop_endpoints(g, h) -> tuple:
    """The two roots in (0, 1) of Γ0, where the loop meets c + d = 1."""
    qa = 16 * h - 16
    qb = 16 + g - 16 * h - g * h
    qc = -g
    disc = qb * qb - 4 * qa * qc
    if disc <= 0:
        raise ValueError(f"discriminant {disc} <= 0: no two endpoints")
    r = math.sqrt(disc)
    # stable quadratic formula
    q = -0.5 * (qb + math.copysign(r, qb))
    roots = sorted((float(q / qa), float(qc / q)))
    if not all(0 < x < 1 for x in roots):
        raise ValueError(f"endpoint roots {roots} not in (0, 1)")
    return tuple(roots)


def a_on_u_ab(c, d, h):
    """a solving H(a, 1-a, c, d) = h."""
    return (2 * d + h - c * h - d * h) / (1 - c + d + h + c * h - d * h)


@lru_cache(maxsize=1)
def nice_loop_polynomial() -> MPoly:
    """N(c, d; g, h) with G(a, 1-a, c, d) - g = -N/D, D = cd(1-c+d+h+ch-dh)."""
    c, d, g, h = variables("c d g h")
    num = 2 * d + h - c * h - d * h
    den = 1 - c + d + h + c * h - d * h
    # every factor of F1, F2 is affine in (a, b), so den * factor is polynomial
    a_hom, b_hom = num, den - num
    e = a_hom * c + b_hom * d  # den * e
    f1 = [den + a_hom - b_hom, den * (1 + c - d), e + b_hom - c * den, e + d * den - a_hom]
    f2 = [den - a_hom + b_hom, den * (1 - c + d), e - b_hom + c * den, e - d * den + a_hom]
    n1 = f1[0] * f1[1] * f1[2] * f1[3]
    n2 = f2[0] * f2[1] * f2[2] * f2[3]
    # G - g = (n2 - n1)/(den^4 a b c d) - g with ab = num (den - num)/den^2
    m = n2 - n1 - g * den**2 * num * (den - num) * c * d
    for f in (num, den - num, den):
        while f.divides(m):
            m = m.exact_div(f)
    return -m


def _float_terms(poly: MPoly, g: float, h: float) -> list:
    gi, hi = poly.vars.index("g"), poly.vars.index("h")
    ci, di = poly.vars.index("c"), poly.vars.index("d")
    acc: dict = {}
    for e, co in poly.terms.items():
        key = (e[ci], e[di])
        acc[key] = acc.get(key, 0.0) + float(co) * g ** e[gi] * h ** e[hi]
    return [(co, i, j) for (i, j), co in acc.items()]


class _Bivariate:
    def __init__(self, terms):
        self.terms = terms

    def value_grad(self, c: float, d: float) -> tuple:
        v = nc = nd = 0.0
        for co, i, j in self.terms:
            v += co * c**i * d**j
            if i:
                nc += co * i * c ** (i - 1) * d**j
            if j:
                nd += co * j * c**i * d ** (j - 1)
        return v, np.array([nc, nd])


@dataclass
class NiceLoop:
    level: LevelSpec
    arc: np.ndarray  # (c, d) samples from endpoint to endpoint in the triangle
    points: np.ndarray  # closed polyline of (a, b, c, d)
    cusps: list
    closure_error: float

    def max_level_error(self) -> float:
        g, h = float(self.level.g), float(self.level.h)
        return float(max(max(abs(G(tuple(p)) - g), abs(H(tuple(p)) - h)) for p in self.points))


def _newton_endpoint(poly: _Bivariate, x: np.ndarray) -> np.ndarray:
    for _ in range(50):
        v, gr = poly.value_grad(*x)
        jac = np.array([gr, [1.0, 1.0]])
        dx = np.linalg.solve(jac, [v, x[0] + x[1] - 1])
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    return x


def _trace_arc(poly: _Bivariate, start: np.ndarray, step: float, max_points: int = 100000) -> np.ndarray:
    """Secant-predictor / Newton-corrector continuation of N = 0 into the triangle."""
    _, gr = poly.value_grad(*start)
    tangent = np.array([-gr[1], gr[0]]) / np.linalg.norm(gr)
    if tangent.sum() > 0:
        tangent = -tangent
    pts = [start]
    x, s = start, step
    while len(pts) < max_points:
        pred = x + s * tangent
        y, ok = pred, False
        for _ in range(12):
            v, gr = poly.value_grad(*y)
            jac = np.array([gr, tangent])
            dy = np.linalg.solve(jac, [v, tangent @ (y - pred)])
            y = y - dy
            if np.max(np.abs(dy)) < 1e-15:
                ok = True
                break
        if not ok or np.linalg.norm(y - x) > 2 * s:
            s /= 2
            if s < 1e-9:
                raise RuntimeError("corrector diverged")
            continue
        if y[0] + y[1] >= 1:
            end = _newton_endpoint(poly, x + (y - x) * (1 - x.sum()) / (y - x).sum())
            pts.append(end)
            return np.array(pts)
        if y[0] <= 0 or y[1] <= 0:
            raise RuntimeError(f"continuation left the triangle at {y}")
        secant = (y - x) / np.linalg.norm(y - x)
        tangent = secant
        pts.append(y)
        x = y
        s = min(step, s * 1.5)
    raise RuntimeError("continuation did not return to c + d = 1")


def trace_nice_loop(level: LevelSpec, step: float = 1e-2) -> NiceLoop:
    """The nice loop L₊ ∩ 𝒰: an arc of N = 0 in 𝒰_ab closed up by its image under I."""
    g, h = float(level.g), float(level.h)
    c1, c2 = nice_loop_endpoints(g, h)
    poly = _Bivariate(_float_terms(nice_loop_polynomial(), g, h))
    start = _newton_endpoint(poly, np.array([c1, 1 - c1]))
    arc = _trace_arc(poly, start, step)
    if abs(arc[-1][0] - c2) > 1e-8:
        raise RuntimeError(f"arc ended at c = {arc[-1][0]}, expected {c2}")
    half = []
    for c, d in arc:
        a = a_on_u_ab(c, d, h)
        half.append((a, 1 - a, c, d))
    half = np.array(half)
    mirror = half[:, [2, 3, 0, 1]]
    points = np.vstack([half, mirror[1:]])
    closure = float(np.max(np.abs(points[-1] - points[0])))
    cusps = []
    for p in points[:-1]:
        if abs(p[0] + p[1] - 1) < 1e-9 and abs(p[2] + p[3] - 1) < 1e-9:
            if all(np.max(np.abs(p - q)) > 1e-8 for q in cusps):
                cusps.append(p)
    return NiceLoop(level, arc, points, [CanonCoords(*map(float, q)) for q in cusps], closure)


def hausdorff(p: np.ndarray, q: np.ndarray) -> float:
    dists = np.linalg.norm(p[:, None, :] - q[None, :, :], axis=2)
    return float(max(dists.min(axis=1).max(), dists.min(axis=0).max()))


def degenerate_family(t) -> tuple:
    """(N, λ, μ) at g = t, h = (4 - t)/4 as polynomials in c, d."""
    n = nice_loop_polynomial()
    nt = n.subs({"g": t, "h": (4 - t) / 4})
    c, d = variables("c d")
    lam = (
        2 - 4 * c + 4 * c**3 - 2 * c**4 - 4 * d + 8 * c * d - 4 * c**2 * d + 8 * c**3 * d
        - 4 * c * d**2 - 12 * c**2 * d**2 + 4 * d**3 + 8 * c * d**3 - 2 * d**4
    )
    mu = c * d * (1 + c - d)
    return nt, lam, mu


# -- concavity and reversals -------------------------------------------------------


def _check_u_ab(p):
    a, b, c, d = p
    if a + b != 1:
        raise ValueError("point is not on 𝒰_ab (a + b != 1)")


def concavity_q_closed(p):
    a, _, c, d = p
    return (
        8 * a * (1 - a) * (1 + c - d) ** 2 * (1 - c + d) ** 2 * (c + d - 1) * (c + d - (c - d) ** 2)
        / (c * c * d * d)
    )


@dataclass(frozen=True)
class Concavity:
    closed_form: object
    direct: object
    psi: object


def concavity_q(p) -> Concavity:
    """q = Y·∇(Y·∇(a+b)) with Y = α1 X1 + α2 X2, α frozen at p."""
    _check_u_ab(p)
    _, _, c, d = p
    al1, al2 = 1 + c - d, 1 - c + d

    def y_field(x):
        x1, x2 = X1(x), X2(x)
        return tuple(al1 * u + al2 * v for u, v in zip(x1, x2))

    def psi(x):
        y = y_field(x)
        return y[0] + y[1]

    psi0, grad = exact_gradient(psi, p)
    return Concavity(concavity_q_closed(p), dot(y_field(p), grad), psi0)


def beta_u_ab(p):
    _, _, c, d = p
    return (1 - (c + d)) / ((c + d) - (c - d) ** 2)


@dataclass(frozen=True)
class Reversal:
    i5_image: tuple
    i3_image: tuple
    V: tuple
    W: tuple
    beta: object

    def iota5_matches(self) -> bool:
        z = 0 * self.beta
        return tuple(self.i5_image) == (z, self.beta, self.beta, z)


def _pushforward(word, p, v):
    img, jac = jacobian(lambda q: apply_word(word, q), p)
    return img, tuple(dot(row, v) for row in jac)


def reversal_images(p) -> Reversal:
    """ι5(p), ι3(p) and the pushforwards V = dι5(X_G), W = dι3(X_G)."""
    xg = XG(p)
    i5, v = _pushforward(IOTA5, p, xg)
    i3, w = _pushforward(IOTA3, p, xg)
    return Reversal(i5, i3, v, w, beta_u_ab(p))


def v_closed_forms(p) -> tuple:
    """(V1, V4) on 𝒰_ab as derived by direct expansion."""
    _, _, c, d = p
    f = c * c - 2 * c * d - 2 * c + d * d - 2 * d + 1
    s = c * c - 2 * c * d - c + d * d - d
    return 2 * (c - d - 1) * f / (d * s), -2 * (c - d + 1) * f / (c * s)


def v1_stated(p):
    _, _, c, d = p
    f = 1 - 2 * c + c * c - 2 * d - 2 * c * d + d * d
    return 2 * c * (c - 2) * f / ((1 + c - d) * ((c - d) ** 2 - (c + d)))


def w4_closed_form(p):
    _, _, c, d = p
    return 4 * (1 + d - c) / d


def w4_stated(p):
    _, _, c, d = p
    return 4 * c * (2 - c) / (1 + c - d)


# -- flat charts -------------------------------------------------------------------

CHART_RTOL = 1e-13
CHART_ATOL = 1e-15


@dataclass(frozen=True)
class ChartTranslation:
    t1: float
    t2: float
    residual: float
    iterations: int

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.t1, self.t2])

    @property
    def xg_component(self) -> float:
        return self.t2 - self.t1


def chart_point(base, tau, rtol: float = CHART_RTOL) -> Trajectory:
    """exp(t1 X1 + t2 X2)(base): the flat-chart map, as a unit-time flow."""
    return integrate(base, (float(tau[0]), float(tau[1])), 1.0, tol=math.inf, rtol=rtol, atol=CHART_ATOL)


def shoot_translation(base, target, guess, tol: float = 1e-9, max_iter: int = 25) -> ChartTranslation:
    """Gauss-Newton on tau with chart_point(base, tau) = target.

    Because the flows commute, d/dtau of the chart map is (X1, X2) at the endpoint.
    """
    tau = np.array(guess, dtype=float)
    target = np.array([float(x) for x in target])
    for it in range(1, max_iter + 1):
        traj = chart_point(base, tau)
        if traj.status != "ok":
            raise RuntimeError(f"chart flow failed at tau={tau}: {traj.reason}")
        y = traj.samples[-1]
        r = y - target
        x1, x2 = closed_form_fields(tuple(y))
        step, *_ = np.linalg.lstsq(np.array([x1, x2]).T, -r, rcond=None)
        tau = tau + step
        res = float(np.linalg.norm(r))
        if res < tol and np.linalg.norm(step) < 1e-12:
            return ChartTranslation(float(tau[0]), float(tau[1]), res, it)
    raise RuntimeError(f"shooting did not converge (residual {res:.3g})")


def translation_guesses(base, target, radius: float = 4.0, directions: int = 90) -> list:
    """Rays t(cos θ X1 + sin θ X2) from base, ranked by closest approach to target."""
    target = np.array([float(x) for x in target])
    found = []
    for th in np.linspace(0, 2 * np.pi, directions, endpoint=False):
        u = (math.cos(th), math.sin(th))
        traj = integrate(base, u, radius, tol=math.inf, rtol=1e-8, atol=1e-10)
        dist = np.linalg.norm(traj.samples - target, axis=1)
        i = int(np.argmin(dist))
        found.append((float(dist[i]), traj.times[i] * np.array(u)))
    found.sort(key=lambda x: x[0])
    return [tau for _, tau in found]


def on_level(p, level: LevelSpec, tol: float = 1e-9) -> bool:
    f1, f2 = level_values(p)
    return abs(f1 - float(level.F1)) + abs(f2 - float(level.F2)) < tol


def chart_translation(level: LevelSpec, base, word, guess=None, tol: float = 1e-9, candidates: int = 8):
    """The translation vector (t1, t2) by which a word acts in the flat chart at base.

    Without a guess, ray-search candidates are refined and the shortest
    converged vector is returned; translations are defined modulo the period
    lattice, so a guess (e.g. twice a known translation) picks the branch.
    """
    from .maps import GenWord

    word = word if isinstance(word, GenWord) else GenWord.parse(word)
    base = CanonCoords(*map(float, base))
    if not on_level(base, level):
        raise ValueError("base point is not on the requested level")
    if not word.letters:
        return ChartTranslation(0.0, 0.0, 0.0, 0)
    target = apply_word(word, base)
    if not on_level(target, level, 1e-8):
        raise ValueError("word image is off the level set")
    guesses = [guess] if guess is not None else translation_guesses(base, target)[:candidates]
    results = []
    for g0 in guesses:
        try:
            results.append(shoot_translation(base, target, g0, tol))
        except RuntimeError:
            continue
    if not results:
        raise RuntimeError("shooting diverged from every starting guess")
    return min(results, key=lambda r: np.linalg.norm(r.vector))


def chart_base(level: LevelSpec, word="T3", power: int = 2, step: float = 1e-2):
    """A point of L₊ whose first ``power`` word-iterates keep positive coordinates.

    Scans nice-loop points flowed backward along X_G; deterministic.
    """
    from .maps import GenWord

    word = GenWord.parse(word) if isinstance(word, str) else word
    loop = trace_nice_loop(level, step)
    for i in range(0, len(loop.points), 6):
        p = CanonCoords(*map(float, loop.points[i]))
        traj = integrate(p, "G", -0.1, tol=math.inf, rtol=1e-12)
        for y in traj.samples[:: max(1, len(traj.samples) // 15)]:
            q = CanonCoords(*map(float, y))
            try:
                orbit = [q]
                for _ in range(power):
                    orbit.append(apply_word(word, orbit[-1]))
            except DomainError:
                continue
            if all(min(x) > 0 for x in orbit):
                return q
    raise RuntimeError("no suitable chart base found")


def chart_cloud(base, radius: float = 1.0, n: int = 11) -> list:
    """Rows (t1, t2, a, b, c, d) of the flat chart on an n x n grid."""
    rows = []
    for t1 in np.linspace(-radius, radius, n):
        for t2 in np.linspace(-radius, radius, n):
            traj = chart_point(base, (t1, t2), rtol=1e-10)
            if traj.status == "ok":
                rows.append((float(t1), float(t2), *map(float, traj.samples[-1])))
    return rows
