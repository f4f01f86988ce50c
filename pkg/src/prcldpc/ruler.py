"""Support and separation analysis of a parity-check polynomial."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import InvalidPolynomial, ParseError
from .gf2poly import BinaryPolynomial

MAX_DEGREE = 128


@dataclass(frozen=True)
class RulerProfile:
    e: tuple[int, ...]
    s: tuple[int, ...]

    @property
    def w_h(self) -> int:
        return len(self.e)

    @property
    def k(self) -> int:
        return self.e[-1]

    @property
    def s_max(self) -> int:
        return max(self.s)

    @property
    def i_star(self) -> int:
        """First index holding s_max (unique when the support is a Golomb ruler)."""
        return self.s.index(self.s_max)

    @property
    def internal(self) -> tuple[int, ...]:
        return self.s[1:-1]

    @classmethod
    def from_support(cls, e: Sequence[int]) -> "RulerProfile":
        e = tuple(e)
        if len(e) < 2 or e[0] != 0 or any(b <= a for a, b in zip(e, e[1:])):
            raise InvalidPolynomial(f"support must be strictly ascending from 0: {e}")
        return cls(e, tuple(b - a for a, b in zip(e, e[1:])))


def profile(h: BinaryPolynomial) -> RulerProfile:
    if h.is_zero() or h.degree < 1:
        raise InvalidPolynomial("parity-check polynomial must have degree >= 1")
    if h[0] != 1:
        raise InvalidPolynomial("parity-check polynomial needs h_0 = 1")
    if h.degree > MAX_DEGREE:
        raise InvalidPolynomial(f"degree {h.degree} exceeds the cap of {MAX_DEGREE}")
    return RulerProfile.from_support(h.exponents())


def is_golomb(e: Iterable[int]) -> bool:
    diffs = set()
    for a, b in combinations(sorted(e), 2):
        if b - a in diffs:
            return False
        diffs.add(b - a)
    return True


def rcc_satisfied(h: BinaryPolynomial) -> bool:
    """Row-column constraint of the banded matrix; equivalent to a Golomb support."""
    return is_golomb(h.exponents())


def density_feasible(w_h: int, k: int) -> bool:
    """False when C(w_h, 2) > k, in which case no support of that size can be Golomb."""
    return comb(w_h, 2) <= k


@dataclass(frozen=True)
class QualityReport:
    external_dominance: bool
    external_over_internal: tuple[bool, bool]
    external_sum: bool
    internal_dominance: tuple[int, ...]
    degenerate: bool = False

    @property
    def flag_a(self) -> bool:
        return self.external_dominance

    @property
    def flag_b(self) -> bool:
        return any(self.external_over_internal)

    @property
    def flag_c(self) -> bool:
        return self.external_sum

    @property
    def flag_d(self) -> bool:
        return bool(self.internal_dominance)

    @property
    def good_practice(self) -> bool:
        return not (self.flag_a or self.flag_b or self.flag_c or self.flag_d)

    def as_dict(self) -> dict:
        return {
            "a_external_dominance": self.flag_a,
            "b_external_over_internal": self.flag_b,
            "c_external_sum": self.flag_c,
            "d_internal_dominance": self.flag_d,
            "good_practice": self.good_practice,
        }


def design_quality(prof: RulerProfile) -> QualityReport:
    """Evaluate the low-weight-codeword trigger conditions on the separations.

    With w_h = 3 there are no internal separations; empty sums are 0, so the
    external flags fire unconditionally and the report is marked degenerate.
    """
    s = prof.s
    total = sum(s)
    internal = sum(s[1:-1])
    first, last = s[0], s[-1]
    a = first > total - first or last > total - last
    b = (first > internal, last > internal)
    c = first + last > internal
    d = tuple(i for i in range(1, len(s) - 1) if s[i] > total - s[i])
    return QualityReport(a, b, c, d, degenerate=len(s) < 3)


def parse_rulers(text: str) -> list[tuple[int, ...]]:
    """One ruler per line as ascending space-separated marks; '#' starts a comment line."""
    rulers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        marks = []
        col = 1
        for tok in raw.split():
            col = raw.index(tok, col - 1) + 1
            if not tok.isdigit():
                raise ParseError(f"bad mark {tok!r}", lineno, col)
            marks.append(int(tok))
        if any(b <= a for a, b in zip(marks, marks[1:])):
            raise ParseError("marks must be strictly ascending", lineno)
        rulers.append(tuple(marks))
    return rulers


def read_rulers(path) -> list[tuple[int, ...]]:
    with open(path) as fh:
        return parse_rulers(fh.read())


def builtin_rulers() -> list[tuple[int, ...]]:
    """Optimal Golomb rulers with 2 to 20 marks."""
    text = resources.files("prcldpc.data").joinpath("golomb_rulers.txt").read_text()
    return parse_rulers(text)
