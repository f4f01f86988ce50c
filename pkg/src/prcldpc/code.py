"""PRC-LDPC code objects: banded parity-check matrix, puncturing, shortening.

The mother matrix for length n_p has r = n_p - k rows; row i carries the
coefficients h_0..h_k starting at column i. Puncturing drops trailing
row/column pairs. Shortening forces `head` leading and `tail` trailing
symbols of the mother window to zero and deletes those columns.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import (
    LengthMismatch,
    LengthOutOfRange,
    ParseError,
    RateOverflow,
    RccViolation,
    ShortenTooDeep,
)
from .gf2poly import BinaryPolynomial, format_polynomial, parse_polynomial
from .ruler import profile, rcc_satisfied


@dataclass(frozen=True)
class PrcLdpcCode:
    h: BinaryPolynomial
    n_parent: int
    head: int = 0
    tail: int = 0

    @property
    def k_parent(self) -> int:
        return self.h.degree

    @property
    def z(self) -> int:
        return self.head + self.tail

    @property
    def n(self) -> int:
        return self.n_parent - self.z

    @property
    def k(self) -> int:
        return self.k_parent - self.z

    @property
    def r(self) -> int:
        return self.n_parent - self.k_parent

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def period(self) -> int:
        return (1 << self.k_parent) - 1

    @property
    def shorten_side(self) -> str:
        if self.z == 0 or self.tail == 0:
            return "head"
        return "tail" if self.head == 0 else "split"

    @property
    def support(self) -> list[int]:
        return self.h.exponents()

    def columns(self) -> np.ndarray:
        """Mother-matrix column indices that survive shortening."""
        return np.arange(self.head, self.n_parent - self.tail)

    def check_rows(self) -> list[list[int]]:
        """Column indices (in the shortened numbering) of each parity check."""
        e = self.support
        lo, hi = self.head, self.n_parent - self.tail
        return [[i + t - lo for t in e if lo <= i + t < hi] for i in range(self.r)]

    def matrix(self) -> np.ndarray:
        """Dense r x n parity-check matrix (uint8)."""
        H = np.zeros((self.r, self.n), dtype=np.uint8)
        for i, cols in enumerate(self.check_rows()):
            H[i, cols] = 1
        return H

    def __str__(self):
        return f"({self.n},{self.k}) PRC-LDPC code, h={format_polynomial(self.h)}"


def build(h: BinaryPolynomial, n: int, check_rcc: bool = True) -> PrcLdpcCode:
    k = profile(h).k
    if check_rcc and not rcc_satisfied(h):
        raise RccViolation(f"support {h.exponents()} is not a Golomb ruler")
    if not k + 1 <= n <= (1 << k) - 1:
        raise LengthOutOfRange(f"n={n} outside [{k + 1}, {(1 << k) - 1}]")
    return PrcLdpcCode(h, n)


def puncture(code: PrcLdpcCode, count: int) -> PrcLdpcCode:
    """Remove the last `count` rows and the matching trailing mother columns."""
    if count < 0:
        raise ValueError("puncture count must be nonnegative")
    if code.r - count < 1:
        raise RateOverflow(f"puncturing {count} of {code.r} parity symbols leaves no checks")
    return replace(code, n_parent=code.n_parent - count)


def shorten(code: PrcLdpcCode, z: int, side: str = "head") -> PrcLdpcCode:
    """Delete z information columns from the head, the tail, or both.

    side is "head", "tail", or "split:a,b" with a + b = z.
    """
    if side == "head":
        a, b = z, 0
    elif side == "tail":
        a, b = 0, z
    elif side.startswith("split:"):
        try:
            a, b = (int(t) for t in side[6:].split(","))
        except ValueError:
            raise ValueError(f"bad split specification {side!r}") from None
        if a + b != z:
            raise ValueError(f"split {a}+{b} does not add up to z={z}")
    else:
        raise ValueError(f"unknown shortening side {side!r}")
    if min(a, b) < 0:
        raise ValueError("shortening counts must be nonnegative")
    if code.z + z >= code.k_parent:
        raise ShortenTooDeep(f"cannot shorten {code.z + z} of {code.k_parent} information symbols")
    return replace(code, head=code.head + a, tail=code.tail + b)


def avg_column_weight(code: PrcLdpcCode) -> Fraction:
    """Mean column weight r w_h / n of the unshortened matrix, i.e. (1 - R) w_h."""
    return Fraction(code.r * code.h.weight, code.n_parent)


def syndrome(code: PrcLdpcCode, word) -> np.ndarray:
    w = np.asarray(word, dtype=np.uint8)
    if w.shape != (code.n,):
        raise LengthMismatch(f"word has length {w.size}, code length is {code.n}")
    full = np.zeros(code.n_parent, dtype=np.uint8)
    full[code.head : code.n_parent - code.tail] = w
    out = np.zeros(code.r, dtype=np.uint8)
    for t in code.support:
        out ^= full[t : t + code.r]
    return out


def has_four_cycle(H: np.ndarray) -> bool:
    """True when two rows share two or more columns."""
    Hi = H.astype(np.int32)
    overlap = Hi @ Hi.T
    np.fill_diagonal(overlap, 0)
    return bool((overlap >= 2).any())


def gf2_rank(H: np.ndarray) -> int:
    rows = [int("".join(map(str, row[::-1])), 2) if row.size else 0 for row in H]
    rank = 0
    while rows:
        pivot = max(rows)
        rows.remove(pivot)
        if pivot == 0:
            break
        rank += 1
        top = 1 << (pivot.bit_length() - 1)
        rows = [r ^ pivot if r & top else r for r in rows]
    return rank


def parse_descriptor(text: str) -> PrcLdpcCode:
    """Read a key=value code descriptor.

    Keys: h (exponent list or 0x mask, required), n (mother length, default
    2k), puncture (trailing symbols removed, default 0), z (shortened symbols,
    default 0), shorten (head | tail | split:a,b, default head).
    """
    fields: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for part in line.split(";") if ";" in line else [line]:
            key, sep, value = part.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {part.strip()!r}", lineno, raw.find(part.strip()) + 1)
            key = key.strip()
            if key not in ("h", "n", "puncture", "z", "shorten"):
                raise ParseError(f"unknown key {key!r}", lineno, raw.find(key) + 1)
            # 0-based offset of the value inside the raw line
            start = raw.find(part) + part.find("=") + 1 + len(value) - len(value.lstrip())
            fields[key] = (value.strip(), lineno, start)
    if "h" not in fields:
        raise ParseError("descriptor lacks h=")
    value, lineno, col = fields["h"]
    try:
        h = parse_polynomial(value)
    except ParseError as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], lineno, col + (exc.column or 1)) from None

    def integer(key, default):
        if key not in fields:
            return default
        value, lineno, _ = fields[key]
        try:
            return int(value)
        except ValueError:
            raise ParseError(f"{key} must be an integer, got {value!r}", lineno) from None

    k = h.degree
    code = build(h, integer("n", 2 * k))
    code = puncture(code, integer("puncture", 0))
    z = integer("z", 0)
    if z:
        code = shorten(code, z, fields.get("shorten", ("head", 0))[0])
    return code


def format_descriptor(code: PrcLdpcCode) -> str:
    lines = [f"h={format_polynomial(code.h)}", f"n={code.n_parent}"]
    if code.z:
        side = code.shorten_side
        if side == "split":
            side = f"split:{code.head},{code.tail}"
        lines += [f"z={code.z}", f"shorten={side}"]
    return "\n".join(lines) + "\n"


def read_descriptor(path) -> PrcLdpcCode:
    with open(path) as fh:
        return parse_descriptor(fh.read())


def mother_windows(h: BinaryPolynomial, length: int) -> np.ndarray:
    """k x length array; row i is the recurrence output seeded with unit state e_i."""
    k = h.degree
    taps = [t for t in h.exponents() if t < k]
    M = np.zeros((k, max(length, k)), dtype=np.uint8)
    M[:, :k] = np.eye(k, dtype=np.uint8)
    for j in range(max(length, k) - k):
        acc = M[:, j + taps[0]].copy()
        for t in taps[1:]:
            acc ^= M[:, j + t]
        M[:, j + k] = acc
    return M[:, :length]


def _row_int(row) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class GeneratorBasis:
    """Row-reduced generator of a (possibly shortened) code.

    rows[i] has bit j set for codeword position j; pivots[i] is its leading
    column, so placing info bit i at pivots[i] makes the encoding systematic.
    """

    n: int
    rows: tuple[int, ...]
    pivots: tuple[int, ...]


def generator_basis(code: PrcLdpcCode) -> GeneratorBasis:
    M = mother_windows(code.h, code.n_parent)
    rows = [_row_int(r) for r in M[code.head :]]  # states with a zero head
    tail_mask = ((1 << code.tail) - 1) << (code.n_parent - code.tail)
    # eliminate the tail columns so the surviving rows vanish there
    reduced = []
    for col in range(code.n_parent - code.tail, code.n_parent):
        bit = 1 << col
        piv = next((r for r in rows if r & bit), None)
        if piv is None:
            continue
        rows.remove(piv)
        rows = [r ^ piv if r & bit else r for r in rows]
    assert all(r & tail_mask == 0 for r in rows)
    for r in rows:
        reduced.append(r >> code.head)
    # reduced row echelon form, pivots on the lowest set bit
    out, pivots = [], []
    work = reduced
    while work:
        piv = min(work, key=lambda r: (r & -r))
        work.remove(piv)
        low = piv & -piv
        work = [r ^ piv if r & low else r for r in work]
        out = [r ^ piv if r & low else r for r in out]
        out.append(piv)
        pivots.append(low.bit_length() - 1)
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return GeneratorBasis(code.n, tuple(out[i] for i in order), tuple(pivots[i] for i in order))
