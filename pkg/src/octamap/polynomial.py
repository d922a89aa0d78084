"""Sparse multivariate polynomials over Q, Sylvester resultants, identity testing."""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .scalar import DomainError

# Canonical ordering of variable names; anything else sorts after, alphabetically.
VAR_ORDER = ("a", "b", "c", "d", "g", "h", "t", "k", "l", "x", "y")

DEFAULT_TERM_BUDGET = 10**6


class TermBudgetExceeded(RuntimeError):
    pass


def _var_key(name: str):
    return (VAR_ORDER.index(name), "") if name in VAR_ORDER else (len(VAR_ORDER), name)


class MPoly:
    """Immutable sparse polynomial: ``{exponent tuple: Fraction}`` over ``vars``."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple, object] | None = None, vars: Sequence[str] = ()):
        self.vars = tuple(vars)
        clean = {}
        for exps, coef in (terms or {}).items():
            if len(exps) != len(self.vars):
                raise ValueError("exponent length does not match variables")
            coef = Fraction(coef)
            if coef != 0:
                clean[tuple(exps)] = coef
        self.terms = clean

    # -- construction ---------------------------------------------------
    @classmethod
    def const(cls, c, vars: Sequence[str] = ()) -> "MPoly":
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def var(cls, name: str, vars: Sequence[str] | None = None) -> "MPoly":
        vars = tuple(vars) if vars is not None else (name,)
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls({exps: 1}, vars)

    @classmethod
    def lift(cls, x) -> "MPoly":
        return x if isinstance(x, MPoly) else cls.const(x)

    def with_vars(self, vars: Sequence[str]) -> "MPoly":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = [vars.index(v) for v in self.vars]
        out = {}
        for exps, c in self.terms.items():
            new = [0] * len(vars)
            for i, e in zip(idx, exps):
                new[i] = e
            out[tuple(new)] = c
        return MPoly(out, vars)

    @staticmethod
    def _union(p: "MPoly", q: "MPoly"):
        if p.vars == q.vars:
            return p, q
        vars = tuple(sorted(set(p.vars) | set(q.vars), key=_var_key))
        return p.with_vars(vars), q.with_vars(vars)

    def compact(self) -> "MPoly":
        """Drop variables that do not occur."""
        used = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        vars = tuple(self.vars[i] for i in used)
        return MPoly({tuple(e[i] for i in used): c for e, c in self.terms.items()}, vars)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        p, q = MPoly._union(self, MPoly.lift(other))
        out = dict(p.terms)
        for e, c in q.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(out, p.vars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-MPoly.lift(other))

    def __rsub__(self, other):
        return MPoly.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly({e: c * other for e, c in self.terms.items()}, self.vars)
        p, q = MPoly._union(self, other)
        out: dict = {}
        for e1, c1 in p.terms.items():
            for e2, c2 in q.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, p.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(other)
        p, q = MPoly._union(self, other)
        return p.terms == q.terms

    def __hash__(self):
        c = self.compact()
        return hash((c.vars, frozenset(c.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coeffs_in(self, var: str) -> list:
        """Coefficients ``[c_0, ..., c_n]`` of the polynomial viewed in ``var``."""
        if var not in self.vars:
            return [self]
        i = self.vars.index(var)
        n = self.degree(var)
        buckets = [dict() for _ in range(n + 1)]
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            buckets[e[i]][rest] = c
        return [MPoly(b, self.vars) for b in buckets]

    def monomial_content(self) -> tuple:
        """Exponent-wise minimum over all terms (the largest monomial divisor)."""
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    def strip_monomial(self) -> "MPoly":
        m = self.monomial_content()
        return MPoly({tuple(x - y for x, y in zip(e, m)): c for e, c in self.terms.items()}, self.vars)

    def primitive(self) -> "MPoly":
        """Scale to integer coefficients with gcd 1 and positive leading term."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        lead = self.terms[max(self.terms)]
        s = 1 if lead > 0 else -1
        return self * Fraction(den * s, g)

    def diff(self, var: str) -> "MPoly":
        if var not in self.vars:
            return MPoly({}, self.vars)
        i = self.vars.index(var)
        return MPoly(
            {e[:i] + (e[i] - 1,) + e[i + 1:]: c * e[i] for e, c in self.terms.items() if e[i]},
            self.vars,
        )

    # -- evaluation -----------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "MPoly":
        """Substitute rationals or MPolys for some variables (exact)."""
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        kept_vars = tuple(self.vars[i] for i in keep)
        for v, x in values.items():
            if isinstance(x, float):
                raise TypeError(f"float value for {v}: use evaluate() instead")
        subst = [(i, values[v]) for i, v in enumerate(self.vars) if v in values]
        polys = any(isinstance(x, MPoly) for _, x in subst)
        acc: dict = {}
        out = MPoly({}, kept_vars)
        for e, c in self.terms.items():
            coef = c
            key = tuple(e[i] for i in keep)
            if not polys:
                for i, x in subst:
                    if e[i]:
                        coef *= Fraction(x) ** e[i]
                acc[key] = acc.get(key, 0) + coef
                continue
            term = MPoly({key: coef}, kept_vars)
            for i, x in subst:
                if e[i]:
                    term = term * (x ** e[i] if isinstance(x, MPoly) else Fraction(x) ** e[i])
            out = out + term
        return out if polys else MPoly(acc, kept_vars)

    def evaluate(self, values: Mapping[str, object]):
        """Full evaluation; works for Fraction, float or any ring scalar."""
        total = 0
        for e, c in self.terms.items():
            term = c if not any(isinstance(v, float) for v in values.values()) else float(c)
            for v, k in zip(self.vars, e):
                if k:
                    term = term * values[v] ** k
            total = total + term
        return total

    def __call__(self, **values):
        return self.evaluate(values)

    # -- division -------------------------------------------------------
    def exact_div(self, other: "MPoly") -> "MPoly":
        """Exact quotient; raises ``ArithmeticError`` when ``other`` does not divide."""
        other = MPoly.lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p, q = MPoly._union(self, other)
        if q.is_constant():
            return p * (1 / q.constant_value())
        lead_q = max(q.terms)
        lq = q.terms[lead_q]
        rem = dict(p.terms)
        quot: dict = {}
        while rem:
            lead = max(rem)
            shift = tuple(x - y for x, y in zip(lead, lead_q))
            if min(shift) < 0:
                raise ArithmeticError("polynomial division is not exact")
            coef = rem[lead] / lq
            quot[shift] = quot.get(shift, 0) + coef
            for e, c in q.terms.items():
                k = tuple(x + y for x, y in zip(e, shift))
                v = rem.get(k, 0) - coef * c
                if v == 0:
                    rem.pop(k, None)
                else:
                    rem[k] = v
        return MPoly(quot, p.vars)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.exact_div(self)
        except ArithmeticError:
            return False
        return True

    # -- text -----------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MPoly({format_poly(self)!r})"


def variables(names: str | Sequence[str]) -> tuple:
    """``variables("a b c d")`` -> tuple of MPoly generators over those names."""
    if isinstance(names, str):
        names = names.split()
    names = tuple(names)
    return tuple(MPoly.var(n, names) for n in names)


def format_poly(p: MPoly) -> str:
    """Text form: ``"coeff*a^i*b^j + ..."``; exact round-trip through :func:`parse_poly`."""
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        mag = abs(c)
        coef = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        mono = [f"{v}^{k}" if k > 1 else v for v, k in zip(p.vars, e) if k]
        body = "*".join(mono if mag == 1 and mono else [coef] + mono)
        parts.append(("- " if c < 0 else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


_TERM_RE = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_poly(text: str, vars: Sequence[str] | None = None) -> MPoly:
    """Parse the sum-of-terms format written by :func:`format_poly`."""
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty polynomial text")
    raw_terms = []
    for m in _TERM_RE.finditer(body):
        sgn, term = m.group(1), m.group(2)
        raw_terms.append((-1 if sgn == "-" else 1, term))
    parsed = []
    names = set()
    for sgn, term in raw_terms:
        coef = Fraction(sgn)
        powers = {}
        for f in term.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", f):
                coef *= Fraction(f)
            elif re.fullmatch(r"[A-Za-z_]\w*(\^\d+)?", f):
                name, _, k = f.partition("^")
                powers[name] = powers.get(name, 0) + (int(k) if k else 1)
                names.add(name)
            else:
                raise ValueError(f"cannot parse factor {f!r}")
        parsed.append((coef, powers))
    vars = tuple(vars) if vars is not None else tuple(sorted(names, key=_var_key))
    acc: dict = {}
    for coef, powers in parsed:
        e = tuple(powers.get(v, 0) for v in vars)
        acc[e] = acc.get(e, 0) + coef
    return MPoly(acc, vars)


# ---------------------------------------------------------------------------
# determinants and resultants


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, MPoly) else x == 0


def _exact_div(x, y):
    return x.exact_div(y) if isinstance(x, MPoly) else x / y


def bareiss_det(matrix: Sequence[Sequence], term_budget: int = DEFAULT_TERM_BUDGET):
    """Fraction-free determinant over an integral domain (Fractions or MPolys)."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return Fraction(1)
    sgn = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(m[i][k])), None)
            if swap is None:
                return m[0][0] * 0
            m[k], m[swap] = m[swap], m[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = _exact_div(num, prev)
                if isinstance(m[i][j], MPoly) and len(m[i][j]) > term_budget:
                    raise TermBudgetExceeded(f"{len(m[i][j])} terms exceeds budget {term_budget}")
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sgn > 0 else -det


def sylvester_matrix(p_coeffs: Sequence, q_coeffs: Sequence) -> list:
    """Sylvester matrix from coefficient lists ordered from degree 0 upward.

    Rows: ``deg Q`` shifted copies of P's coefficients (leading first), then
    ``deg P`` shifted copies of Q's, as in the 2-by-3 degree layout.
    """
    m, n = len(p_coeffs) - 1, len(q_coeffs) - 1
    size = m + n
    zero = p_coeffs[0] * 0
    P = list(reversed(p_coeffs))
    Q = list(reversed(q_coeffs))
    rows = []
    for i in range(n):
        rows.append([zero] * i + P + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + Q + [zero] * (size - n - 1 - i))
    return rows


def _trim(coeffs: list) -> list:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and _is_zero(coeffs[-1]):
        coeffs.pop()
    return coeffs


def resultant_coeffs(p_coeffs: Sequence, q_coeffs: Sequence, term_budget: int = DEFAULT_TERM_BUDGET):
    """Resultant of two univariate polynomials given by coefficient lists."""
    p = _trim(p_coeffs)
    q = _trim(q_coeffs)
    m, n = len(p) - 1, len(q) - 1
    if m < 1 and n < 1:
        raise ValueError("both polynomials are constant")
    if m == 0:
        return p[0] ** n
    if n == 0:
        return q[0] ** m
    return bareiss_det(sylvester_matrix(p, q), term_budget)


def sylvester_resultant(P: MPoly, Q: MPoly, var: str | None = None, term_budget: int = DEFAULT_TERM_BUDGET):
    """Resultant of two polynomials univariate in ``var`` (coefficients in any ring).

    If ``var`` is omitted the polynomials must share a single variable.
    Returns a Fraction when the coefficients are constants, else an MPoly.
    """
    P, Q = MPoly._union(MPoly.lift(P), MPoly.lift(Q))
    if var is None:
        used = {v for v in P.compact().vars} | {v for v in Q.compact().vars}
        if len(used) != 1:
            raise ValueError("give var explicitly for multivariate inputs")
        var = used.pop()
    r = resultant_coeffs(P.coeffs_in(var), Q.coeffs_in(var), term_budget)
    if isinstance(r, MPoly) and r.is_constant():
        return r.constant_value()
    return r


def eliminate(P: MPoly, Q: MPoly, var: str, term_budget: int = DEFAULT_TERM_BUDGET) -> MPoly:
    """``res(P, Q, var)`` as a polynomial in the remaining variables."""
    P, Q = MPoly._union(MPoly.lift(P), MPoly.lift(Q))
    if var not in P.vars or (P.degree(var) <= 0 and Q.degree(var) <= 0):
        raise ValueError(f"variable {var!r} absent from both inputs")
    if P.degree(var) < 1 or Q.degree(var) < 1:
        raise ValueError(f"both inputs need positive degree in {var!r}")
    r = MPoly.lift(resultant_coeffs(P.coeffs_in(var), Q.coeffs_in(var), term_budget))
    rest = tuple(v for v in P.vars if v != var)
    return r.compact().with_vars(rest)


def resultant_at(P: MPoly, Q: MPoly, var: str, point: Mapping[str, object]) -> Fraction:
    """Specialise every variable except ``var`` then take the scalar resultant.

    Agrees with ``eliminate(P, Q, var)`` evaluated at ``point`` whenever the
    leading coefficients in ``var`` do not vanish there; raises otherwise.
    """
    p = P.subs(point)
    q = Q.subs(point)
    for orig, spec in ((P, p), (Q, q)):
        if spec.degree(var) != orig.degree(var):
            raise DomainError(f"leading coefficient in {var}", "degree drops at the sample point")
    return sylvester_resultant(p, q, var)


def nonzero_witness(P: MPoly, Q: MPoly, var: str, rng: random.Random, attempts: int = 20):
    """Find a rational point where ``res(P, Q, var)`` is nonzero.

    Certifies the resultant is a nontrivial polynomial without expanding it.
    Returns ``(point, value)`` or ``None``.
    """
    P, Q = MPoly._union(P, Q)
    others = [v for v in P.vars if v != var]
    for _ in range(attempts):
        pt = {v: random_rational(rng, 50) for v in others}
        try:
            r = resultant_at(P, Q, var, pt)
        except DomainError:
            continue
        if r != 0:
            return pt, r
    return None


# ---------------------------------------------------------------------------
# randomized identity testing


def random_rational(rng: random.Random, bound: int = 10**6, nonzero: bool = True) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x != 0 or not nonzero:
            return x


def identity_check(
    lhs: Callable,
    rhs: Callable,
    trials: int = 50,
    seed: int = 0,
    nvars: int = 4,
    bound: int = 10**6,
    sampler: Callable | None = None,
) -> bool:
    """Schwartz-Zippel test that two rational expressions agree.

    Each side is called with a tuple of ``nvars`` random rationals (numerator
    and denominator bounded by ``bound``).  Points where either side divides by
    zero are skipped.  Passing at 50 points certifies equality only with
    overwhelming probability, not absolutely.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    draw = sampler or (lambda r: tuple(random_rational(r, bound) for _ in range(nvars)))
    good = 0
    attempts = 0
    while good < trials:
        if attempts >= 100 * trials:
            raise RuntimeError(f"only {good} valid sample points in {attempts} attempts")
        attempts += 1
        p = draw(rng)
        try:
            left = lhs(p)
            right = rhs(p)
        except (ZeroDivisionError, DomainError):
            continue
        if _as_tuple(left) != _as_tuple(right):
            return False
        good += 1
    return True


def _as_tuple(x):
    return tuple(x) if isinstance(x, (tuple, list)) else (x,)


def prod(items: Iterable, start=1):
    out = start
    for x in items:
        out = out * x
    return out
