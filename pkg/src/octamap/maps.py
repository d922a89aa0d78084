"""Generator maps A, Δ, I, J and words in them.

Words are applied right to left, so ``T3 = AΔAΔ`` applies Δ first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .invariants import F1, F2, factor_values
from .octagon import CanonCoords, defects, is_convex, vertices_from_coords
from .scalar import DomainError, check_nonzero, is_zero, sign


def gen_A(p):
    a, b, c, d = p
    return CanonCoords(-b, -a, -d, -c)


def gen_I(p):
    a, b, c, d = p
    return CanonCoords(c, d, a, b)


def gen_J(p):
    a, b, c, d = p
    return CanonCoords(b, a, d, c)


def gen_D(p):
    """The involution Δ."""
    a, b, c, d = p
    e = a * c + b * d
    check_nonzero(a, "a")
    check_nonzero(c, "c")
    den = check_nonzero(e + a + c + 1, "e+a+c+1")
    cden, aden = c * den, a * den
    return CanonCoords(
        b * (c + d + 1) / cden,
        d * (e + b + c) / cden,
        d * (a + b + 1) / aden,
        b * (e + a + d) / aden,
    )


GENERATORS = {"A": gen_A, "D": gen_D, "I": gen_I, "J": gen_J}

ALIASES = {"T3i": "DADA", "T3": "ADAD", "i3": "ADA", "i5": "ADADA"}

_TOKEN = re.compile(r"T3i|T3|i3|i5|id|[ADIJΔ]")


class WordDomainError(DomainError):
    """A generator of a word failed; ``index`` counts applied generators (0 = first)."""

    def __init__(self, index: int, letter: str, cause: DomainError):
        self.index = index
        self.letter = letter
        self.cause = cause
        super().__init__(cause.factor, f"generator {letter} at step {index}")


@dataclass(frozen=True)
class GenWord:
    """A word over {A, D, I, J}; ``letters[0]`` is applied last."""

    letters: tuple = field(default=())

    @classmethod
    def parse(cls, text: str) -> "GenWord":
        compact = re.sub(r"[\s,*·∘]", "", text)
        letters, pos = [], 0
        while pos < len(compact):
            m = _TOKEN.match(compact, pos)
            if m is None:
                raise ValueError(f"bad word {text!r} at position {pos}")
            tok = m.group(0)
            if tok == "Δ":
                tok = "D"
            if tok != "id":
                letters.extend(ALIASES.get(tok, tok))
            pos = m.end()
        return cls(tuple(letters))

    def __str__(self) -> str:
        return "".join(self.letters) or "id"

    def __mul__(self, other: "GenWord") -> "GenWord":
        return GenWord(self.letters + other.letters)

    def inverse(self) -> "GenWord":
        # every generator is an involution
        return GenWord(tuple(reversed(self.letters)))

    def __call__(self, p):
        return apply_word(self, p)


T3_WORD = GenWord.parse("T3")
T3_INV_WORD = GenWord.parse("T3i")
IOTA3 = GenWord.parse("i3")
IOTA5 = GenWord.parse("i5")


def _as_word(w) -> GenWord:
    return w if isinstance(w, GenWord) else GenWord.parse(w)


def apply_generator(gen: str, p):
    return GENERATORS["D" if gen == "Δ" else gen](p)


def apply_word(w, p):
    w = _as_word(w)
    q = CanonCoords(*p)
    for i, letter in enumerate(reversed(w.letters)):
        try:
            q = GENERATORS[letter](q)
        except DomainError as exc:
            raise WordDomainError(i, letter, exc) from exc
        except ZeroDivisionError as exc:
            raise WordDomainError(i, letter, DomainError("denominator", str(exc))) from exc
    return q


def t3(p):
    return apply_word(T3_WORD, p)


def t3_inv(p):
    return apply_word(T3_INV_WORD, p)


@dataclass(frozen=True)
class OrbitRow:
    index: int
    coords: CanonCoords
    convex: bool
    F1: object
    F2: object
    G: object


@dataclass
class OrbitScan:
    rows: list
    stop_forward: str | None = None
    stop_backward: str | None = None

    def drift(self) -> float:
        """Max deviation of (F1, F2) from the starting row."""
        base = next(r for r in self.rows if r.index == 0)
        return max(abs(float(r.F1 - base.F1)) + abs(float(r.F2 - base.F2)) for r in self.rows)

    def convex_range(self) -> tuple:
        """Largest n_back, n_fwd such that all P_j for -n_back <= j <= n_fwd are convex."""
        flags = {r.index: r.convex for r in self.rows}
        fwd = 0
        while flags.get(fwd + 1):
            fwd += 1
        back = 0
        while flags.get(-(back + 1)):
            back += 1
        return back, fwd


def _row(i, q) -> OrbitRow:
    f1, f2 = F1(q), F2(q)
    return OrbitRow(i, q, is_convex(vertices_from_coords(q)), f1, f2, f2 - f1)


def orbit_scan(p, steps_forward: int, steps_backward: int = 0) -> OrbitScan:
    """P_j = T3^j(p) for -steps_backward <= j <= steps_forward, stopping at domain errors."""
    p = CanonCoords(*p)
    rows = [_row(0, p)]
    scan = OrbitScan(rows)
    for step, word, attr, direction in (
        (steps_forward, T3_WORD, "stop_forward", 1),
        (steps_backward, T3_INV_WORD, "stop_backward", -1),
    ):
        q = p
        for j in range(1, step + 1):
            try:
                q = apply_word(word, q)
                rows.append(_row(direction * j, q))
            except DomainError as exc:
                setattr(scan, attr, f"step {direction * j}: {exc}")
                break
    rows.sort(key=lambda r: r.index)
    return scan


@dataclass(frozen=True)
class ConvexLifetime:
    """First index at which the T3 orbit stops being convex, in each direction.

    ``None`` means convex for all ``max_steps`` iterates; ``domain`` records a
    direction whose orbit hit an undefined map instead.
    """

    forward: int | None
    backward: int | None
    domain: tuple = ()

    @property
    def exits(self) -> bool:
        return self.forward is not None or self.backward is not None


def convex_lifetime(p, max_steps: int) -> ConvexLifetime:
    exits, domain = [], []
    for word, name in ((T3_WORD, "forward"), (T3_INV_WORD, "backward")):
        q, hit = p, None
        for j in range(1, max_steps + 1):
            try:
                q = apply_word(word, q)
            except DomainError:
                hit = j
                domain.append(name)
                break
            if not is_convex(vertices_from_coords(q)):
                hit = j
                break
        exits.append(hit)
    return ConvexLifetime(exits[0], exits[1], tuple(domain))


# Positive chart words, keyed by the sign pair of (inscribed, circumscribed) defects.
# J flips only the circumscribed sign, so it serves (+,-); (-,-) needs JDJ.
CHART_WORDS = {(1, 1): "id", (-1, -1): "JDJ", (-1, 1): "JD", (1, -1): "J"}


def to_positive_chart(p) -> tuple:
    """Word moving a convex point with nonzero defects into 𝒳₊, and its image."""
    p = CanonCoords(*p)
    if not is_convex(vertices_from_coords(p)):
        raise ValueError("point is not convex")
    ins, circ = defects(p)
    if is_zero(ins) or is_zero(circ):
        raise ValueError("inscribed or circumscribed point: no chart word")
    word = GenWord.parse(CHART_WORDS[(sign(ins), sign(circ))])
    return word, apply_word(word, p)


def all_positive(p) -> bool:
    return all(not is_zero(x) and sign(x) == 1 for x in factor_values(p))
