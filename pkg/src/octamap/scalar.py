"""Scalar kernel: exact rationals, 4-variable dual numbers, float helpers.

Every formula in the package is written with plain ``+ - * /`` so the same
code runs on :class:`fractions.Fraction`, ``float`` and :class:`Dual4`
(whose components may themselves be fractions, floats or duals).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

Rat = Fraction

# Magnitude below which a float denominator counts as vanished.
FLOAT_ZERO = 1e-14

_RAT_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")
_DEC_RE = re.compile(r"^\s*-?(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?\s*$")


class DomainError(ArithmeticError):
    """A denominator vanished while evaluating a formula.

    ``factor`` names the vanishing expression, e.g. ``"e+a+c+1"``.
    """

    def __init__(self, factor: str, detail: str = ""):
        self.factor = factor
        msg = f"{factor} = 0"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def rat_parse(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string into a reduced fraction."""
    m = _RAT_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def parse_scalar(text: str, exact: bool = True):
    """Parse a fraction, integer or decimal literal.

    With ``exact`` a decimal such as ``"0.9"`` becomes ``9/10``; otherwise
    every value comes back as a float.
    """
    text = text.strip()
    if _RAT_RE.match(text):
        r = rat_parse(text)
        return r if exact else float(r)
    if _DEC_RE.match(text):
        return Fraction(text) if exact else float(text)
    if exact:
        raise ValueError(f"exact backend needs a rational literal, got {text!r}")
    return float(text)


def fmt_rat(x) -> str:
    """Render a scalar for JSON: fractions as ``"p/q"``, floats with 17 digits."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, Surd)):
        return str(x)
    return format(float(x), ".17g")


def value_of(x):
    """Strip dual parts down to the underlying scalar."""
    while isinstance(x, Dual4):
        x = x.value
    return x


def is_zero(x, tol: float = FLOAT_ZERO) -> bool:
    """Exact zero test for rationals, ``|x| < tol`` for floats."""
    v = value_of(x)
    if isinstance(v, (Fraction, int, Surd)):
        return v == 0
    return abs(v) < tol


def check_nonzero(x, factor: str):
    if is_zero(x):
        raise DomainError(factor)
    return x


def sign(x) -> int:
    v = value_of(x)
    return int(v > 0) - int(v < 0)


@dataclass(frozen=True)
class Surd:
    """Exact element ``r + s·√n`` of the real quadratic field Q(√n).

    Enough to iterate octagons such as the regular one, whose coordinates
    are √2/2, without rounding.
    """

    r: Fraction
    s: Fraction = Fraction(0)
    n: int = 2

    def _lift(self, x) -> "Surd":
        if isinstance(x, Surd):
            if x.n != self.n:
                raise ValueError("mixing different quadratic fields")
            return x
        if isinstance(x, (int, Fraction)):
            return Surd(Fraction(x), Fraction(0), self.n)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Surd(self.r + o.r, self.s + o.s, self.n)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.r, -self.s, self.n)

    def __sub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Surd(self.r * o.r + self.n * self.s * o.s, self.r * o.s + self.s * o.r, self.n)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.r, -self.s, self.n)

    def norm(self) -> Fraction:
        return self.r * self.r - self.n * self.s * self.s

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        nm = o.norm()
        if nm == 0:
            raise ZeroDivisionError("Surd division by zero")
        q = self * o.conjugate()
        return Surd(q.r / nm, q.s / nm, self.n)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        out = Surd(Fraction(1), Fraction(0), self.n)
        for _ in range(k):
            out = out * self
        return out

    def sign(self) -> int:
        a, b = sign(self.r), sign(self.s)
        if a == b or b == 0:
            return a
        if a == 0:
            return b
        # opposite signs: compare r² with n·s²
        return a * sign(self.r * self.r - self.n * self.s * self.s)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.r == o.r and self.s == o.s

    def __hash__(self):
        return hash((self.r, self.s, self.n))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return not self > other

    def __ge__(self, other):
        return not self < other

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(self.n)

    def __str__(self):
        root = f"sqrt({self.n})"
        if self.s == 0:
            return str(self.r)
        tail = root if self.s == 1 else f"{self.s}*{root}"
        if self.r == 0:
            return tail
        return f"{self.r}{'-' if self.s < 0 else '+'}{tail.lstrip('-')}"


def to_float(x) -> float:
    return float(value_of(x))


@dataclass(frozen=True)
class Dual4:
    """First-order dual number in four directions ``(d/da, d/db, d/dc, d/dd)``."""

    value: object
    partials: tuple = (0, 0, 0, 0)

    @staticmethod
    def lift(x) -> "Dual4":
        return x if isinstance(x, Dual4) else Dual4(x, (0, 0, 0, 0))

    @staticmethod
    def variable(x, index: int) -> "Dual4":
        return Dual4(x, tuple(1 if i == index else 0 for i in range(4)))

    def __add__(self, other):
        o = Dual4.lift(other)
        return Dual4(self.value + o.value, tuple(p + q for p, q in zip(self.partials, o.partials)))

    __radd__ = __add__

    def __neg__(self):
        return Dual4(-self.value, tuple(-p for p in self.partials))

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-Dual4.lift(other))

    def __rsub__(self, other):
        return Dual4.lift(other) - self

    def __mul__(self, other):
        o = Dual4.lift(other)
        return Dual4(
            self.value * o.value,
            tuple(self.value * q + o.value * p for p, q in zip(self.partials, o.partials)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual4.lift(other)
        if is_zero(o.value, 0.0):
            raise ZeroDivisionError("dual division by zero value")
        q = self.value / o.value
        return Dual4(q, tuple((p - q * r) / o.value for p, r in zip(self.partials, o.partials)))

    def __rtruediv__(self, other):
        return Dual4.lift(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("Dual4 supports non-negative integer powers only")
        out = Dual4.lift(1)
        for _ in range(n):
            out = out * self
        return out


def _seed(p: Sequence) -> tuple:
    return tuple(Dual4.variable(x, i) for i, x in enumerate(p))


def exact_gradient(f: Callable, p: Sequence) -> tuple:
    """Return ``(f(p), grad f(p))`` by one forward-mode dual evaluation.

    Raises :class:`DomainError` if a denominator of ``f`` vanishes at ``p``.
    """
    try:
        out = f(_seed(p))
    except ZeroDivisionError as exc:
        raise DomainError("denominator", f"outside domain of f: {exc}") from exc
    out = Dual4.lift(out)
    return out.value, tuple(out.partials)


def jacobian(m: Callable, p: Sequence) -> tuple:
    """Image ``m(p)`` and the 4x4 Jacobian ``J[i][j] = d m_i / d x_j``."""
    try:
        img = m(_seed(p))
    except ZeroDivisionError as exc:
        raise DomainError("denominator", str(exc)) from exc
    img = [Dual4.lift(y) for y in img]
    return tuple(y.value for y in img), tuple(tuple(y.partials) for y in img)


def central_difference(f: Callable, p: Sequence, step: float = 1e-6) -> tuple:
    """Float gradient by central differences; an oracle for :func:`exact_gradient`."""
    x = [float(v) for v in p]
    grad = []
    for i in range(len(x)):
        hi = list(x)
        lo = list(x)
        hi[i] += step
        lo[i] -= step
        grad.append((float(f(tuple(hi))) - float(f(tuple(lo)))) / (2 * step))
    return tuple(grad)


def isclose_rel(x: float, y: float, rel: float, abs_floor: float = 1e-12) -> bool:
    return math.isclose(x, y, rel_tol=rel, abs_tol=abs_floor)
