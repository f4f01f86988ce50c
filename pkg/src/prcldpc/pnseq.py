"""The pseudo-noise sequence p behind every PRC-LDPC codeword.

p has period N = 2^k - 1 and satisfies p[j+k] = XOR_{i<k} h_i p[j+i]. Its
canonical origin is p = [g, 0_{k-1}] with g = (x^N + 1) / h*(x), so the
single run of k-1 zeros occupies positions N-k+1 .. N-1.

For large k the sequence is never materialized. A PnNavigator is a cursor
seeded from any k known consecutive bits (Property 1 makes that window
unique) and walks in either direction. Absolute positions are recovered by
a discrete logarithm in GF(2^k) when the factorization of N allows it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from .errors import NotFound, NotPrimitive, TooLarge
from .gf2poly import (
    BinaryPolynomial,
    _divmod,
    _mulmod,
    _powmod,
    default_factor_table,
    is_primitive,
    reciprocal,
)
from .ruler import profile

FULL_MAX_K = 26
DIVISION_MAX_K = 20
PROPERTY1_MAX_K = 20
DLOG_MAX_PRIME = 1 << 34


def _check_primitive(h: BinaryPolynomial) -> None:
    if not is_primitive(h):
        raise NotPrimitive(f"{h} is not primitive")


def initial_state(h: BinaryPolynomial) -> int:
    """First k bits of p packed with bit a = p[a].

    They are the low coefficients of g, i.e. the inverse of h*(x) modulo x^k.
    """
    k = h.degree
    hs = reciprocal(h).bits
    g = 0
    for i in range(k):
        acc = 1 if i == 0 else 0
        for j in range(1, i + 1):
            acc ^= (hs >> j) & (g >> (i - j)) & 1
        g |= acc << i
    return g


def _lfsr_fill(p: np.ndarray, k: int, taps: list[int], start: int) -> None:
    """Extend p in place from p[:start] using the recurrence.

    h(x)^(2^m) = h(x^(2^m)) over GF(2), so p also obeys the recurrence with
    every tap stretched by 2^m. That lets each numpy pass emit a block of
    (k - max tap) * 2^m bits instead of one bit at a time.
    """
    n = len(p)
    filled = start
    gap = k - max(taps)
    while filled < n:
        step = 1
        while k * step * 2 <= filled:
            step *= 2
        block = min(gap * step, n - filled)
        base = filled - k * step
        acc = p[base + taps[0] * step : base + taps[0] * step + block].copy()
        for t in taps[1:]:
            acc ^= p[base + t * step : base + t * step + block]
        p[filled : filled + block] = acc
        filled += block


def _taps(h: BinaryPolynomial) -> list[int]:
    return [i for i in h.exponents() if i < h.degree]


def generate_prefix(h: BinaryPolynomial, length: int) -> np.ndarray:
    """p[0:length] as uint8, without primitivity checks."""
    k = h.degree
    p = np.zeros(max(length, k), dtype=np.uint8)
    s0 = initial_state(h)
    for a in range(k):
        p[a] = (s0 >> a) & 1
    _lfsr_fill(p, k, _taps(h), k)
    return p[:length]


def generate_full(h: BinaryPolynomial, method: str = "lfsr") -> np.ndarray:
    """The whole period of p as a uint8 array of length 2^k - 1."""
    k = h.degree
    if k > FULL_MAX_K:
        raise TooLarge(f"full materialization is capped at k <= {FULL_MAX_K}")
    _check_primitive(h)
    n = (1 << k) - 1
    if method == "lfsr":
        return generate_prefix(h, n)
    if method == "division":
        if k > DIVISION_MAX_K:
            raise TooLarge(f"division route is capped at k <= {DIVISION_MAX_K}")
        q, r = _divmod((1 << n) | 1, reciprocal(h).bits)
        assert r == 0
        p = np.zeros(n, dtype=np.uint8)
        bits = np.frombuffer(q.to_bytes((n - k + 8) // 8, "little"), dtype=np.uint8)
        p[: n - k + 1] = np.unpackbits(bits, bitorder="little")[: n - k + 1]
        return p
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=64)
def _hankel(h: BinaryPolynomial) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Rows of the map beta -> window state, and of its inverse.

    p[j] = L(x^j mod h) for a linear functional L with L(x^i) = p[i], so the
    window at position j is M * (x^j mod h) with Hankel M[a][i] = p[a+i].
    """
    k = h.degree
    p = generate_prefix(h, 2 * k - 1)
    rows = tuple(sum(int(p[a + i]) << i for i in range(k)) for a in range(k))
    aug = [rows[a] | (1 << (k + a)) for a in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r] >> col & 1), None)
        if piv is None:
            raise NotPrimitive(f"{h} does not generate a maximal-length sequence")
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(k):
            if r != col and aug[r] >> col & 1:
                aug[r] ^= aug[col]
    mask = (1 << k) - 1
    # inverse rows: column a of the inverse is bit a of (aug[i] >> k)
    inv = tuple(aug[i] >> k & mask for i in range(k))
    return rows, inv


def _apply(rows, v: int) -> int:
    out = 0
    for a, row in enumerate(rows):
        out |= ((row & v).bit_count() & 1) << a
    return out


def state_at(h: BinaryPolynomial, position: int) -> int:
    """Window p[position : position+k] for any k, via x^position mod h."""
    k = h.degree
    n = (1 << k) - 1
    beta = _powmod(2, position % n, h.bits)
    rows, _ = _hankel(h)
    return _apply(rows, beta)


def _bsgs(g: int, target: int, order: int, m: int) -> int | None:
    step = isqrt(order) + 1
    table = {}
    e = 1
    for j in range(step):
        table.setdefault(e, j)
        e = _mulmod(e, g, m)
    giant = _powmod(g, order - step, m)  # g^-step
    y = target
    for i in range(step + 1):
        j = table.get(y)
        if j is not None:
            return (i * step + j) % order
        y = _mulmod(y, giant, m)
    return None


def discrete_log(h: BinaryPolynomial, beta: int) -> int | None:
    """log_x(beta) in GF(2)[x]/h by Pohlig-Hellman; None if a prime factor is too large."""
    k = h.degree
    n = (1 << k) - 1
    m = h.bits
    primes = default_factor_table()[k]
    if primes and max(primes) > DLOG_MAX_PRIME:
        return None
    powers = {}
    for q in primes:
        powers[q] = powers.get(q, 0) + 1
    residues, moduli = [], []
    for q, e in powers.items():
        qe = q**e
        gamma = _powmod(2, n // q, m)
        x_acc = 0
        for i in range(e):
            # strip what is already known, project into the order-q subgroup
            known = _powmod(_powmod(2, x_acc, m), n - 1, m)  # x^-x_acc
            t = _powmod(_mulmod(beta, known, m), n // q ** (i + 1), m)
            d = _bsgs(gamma, t, q, m)
            if d is None:
                raise NotFound("discrete logarithm does not exist")
            x_acc += d * q**i
        residues.append(x_acc % qe)
        moduli.append(qe)
    x, mod = 0, 1
    for r, md in zip(residues, moduli):
        # CRT merge
        t = ((r - x) * pow(mod, -1, md)) % md
        x += mod * t
        mod *= md
    return x % n


def position_of_state(h: BinaryPolynomial, state: int) -> int | None:
    """Index j with p[j : j+k] equal to the packed state, or None when intractable."""
    if state == 0:
        raise NotFound("the all-zero k-tuple never occurs in p")
    _, inv = _hankel(h)
    return discrete_log(h, _apply(inv, state))


def pack_bits(bits) -> int:
    return sum((int(b) & 1) << i for i, b in enumerate(bits))


def unpack_bits(state: int, k: int) -> list[int]:
    return [(state >> i) & 1 for i in range(k)]


class PnNavigator:
    """Bidirectional cursor over p; `state` holds p[position : position+k]."""

    def __init__(self, h: BinaryPolynomial, state: int, position: int | None = None):
        if state == 0:
            raise ValueError("navigator state must be nonzero")
        self.h = h
        self.k = h.degree
        self.period = (1 << self.k) - 1
        self.state = state
        self.position = None if position is None else position % self.period
        self._full = (1 << self.k) - 1
        self._fmask = sum(1 << i for i in _taps(h))
        self._bmask = sum(1 << (i - 1) for i in h.exponents() if i >= 1)

    @classmethod
    def at_origin(cls, h: BinaryPolynomial) -> "PnNavigator":
        return cls(h, initial_state(h), 0)

    @classmethod
    def at(cls, h: BinaryPolynomial, position: int) -> "PnNavigator":
        return cls(h, state_at(h, position), position)

    @classmethod
    def from_window(cls, h: BinaryPolynomial, bits, locate: bool = True) -> "PnNavigator":
        """Seed from k consecutive bits of p (any nonzero k-tuple occurs exactly once)."""
        bits = list(bits)
        if len(bits) != h.degree:
            raise ValueError(f"need exactly k={h.degree} seed bits")
        state = pack_bits(bits)
        pos = position_of_state(h, state) if locate else None
        return cls(h, state, pos)

    def copy(self) -> "PnNavigator":
        return PnNavigator(self.h, self.state, self.position)

    def window(self) -> list[int]:
        return unpack_bits(self.state, self.k)

    def step_forward(self) -> int:
        """Advance one position; returns the bit that entered at the right end."""
        bit = (self.state & self._fmask).bit_count() & 1
        self.state = (self.state >> 1) | (bit << (self.k - 1))
        if self.position is not None:
            self.position = (self.position + 1) % self.period
        return bit

    def step_backward(self) -> int:
        """Retreat one position; returns the bit that entered at the left end."""
        bit = (self.state & self._bmask).bit_count() & 1
        self.state = ((self.state << 1) | bit) & self._full
        if self.position is not None:
            self.position = (self.position - 1) % self.period
        return bit

    def read(self, offset: int, length: int) -> np.ndarray:
        """p[position+offset : position+offset+length] without moving the cursor."""
        nav = self.copy()
        if offset < 0:
            for _ in range(-offset):
                nav.step_backward()
        else:
            for _ in range(min(offset, length + offset)):
                nav.step_forward()
        out = np.zeros(length, dtype=np.uint8)
        head = min(length, nav.k)
        for a in range(head):
            out[a] = (nav.state >> a) & 1
        for a in range(head, length):
            out[a] = nav.step_forward()
        return out


@dataclass(frozen=True)
class Landmarks:
    t2_position: int | None
    z0: int
    z1: int
    left_comb_spacing: int | None
    right_comb_spacing: int | None
    left_comb_ones: int
    right_comb_ones: int
    h_star_state: int

    @property
    def zeros_total(self) -> int:
        return self.z0 + self.z1


def predicted_zero_zones(h: BinaryPolynomial) -> tuple[int, int]:
    """Closed-form widths (left, right) of the zero runs flanking h* in p.

    left = 2 (s_0 + ... + s_i*) - k - 1 and right = 2 (s_i* + ... + s_last) - k - 1.
    They add up to 2 (s_max - 1). They match the sequence only when both
    are nonnegative.
    """
    prof = profile(h)
    i = prof.i_star
    return 2 * sum(prof.s[: i + 1]) - prof.k - 1, 2 * sum(prof.s[i:]) - prof.k - 1


def _comb(nav: PnNavigator, forward: bool, limit: int) -> tuple[int | None, int]:
    """Spacing of the first two ones met walking outward, and how long it repeats."""
    step = nav.step_forward if forward else nav.step_backward
    ones = [0]
    dist = 0
    while dist < limit and len(ones) < 64:
        dist += 1
        if step():
            ones.append(dist)
            if len(ones) >= 3 and ones[-1] - ones[-2] != ones[1] - ones[0]:
                ones.pop()
                break
    if len(ones) < 2:
        return None, len(ones)
    return ones[1] - ones[0], len(ones)


def locate_h_star(h: BinaryPolynomial, locate_position: bool = True) -> Landmarks:
    """Find the (k+1)-tuple equal to h* in p and measure the zero zones around it."""
    k = h.degree
    hs = reciprocal(h)
    coeffs = [hs[i] for i in range(k + 1)]
    nav = PnNavigator.from_window(h, coeffs[:k], locate=locate_position)
    probe = nav.copy()
    if probe.step_forward() != coeffs[k]:
        raise NotFound("h* does not occur in p; the support is probably not a Golomb ruler")
    limit = 4 * k + 8
    left = nav.copy()
    z0 = 0
    while not left.step_backward():
        z0 += 1
        if z0 > limit + (1 << min(k, 20)):
            raise NotFound("left zero zone did not terminate")
    # probe sits one past h*'s start, so its next emitted bit follows h*
    right = probe
    z1 = 0
    while not right.step_forward():
        z1 += 1
        if z1 > limit + (1 << min(k, 20)):
            raise NotFound("right zero zone did not terminate")
    lsp, lcount = _comb(left, False, limit)
    rsp, rcount = _comb(right, True, limit)
    return Landmarks(nav.position, z0, z1, lsp, rsp, lcount, rcount, nav.state)


def t1_position(k: int) -> int:
    """Start of the k-tuple (0^{k-1}, 1) that wraps the canonical origin."""
    return (1 << k) - 1 - (k - 1)


def verify_property_1(h: BinaryPolynomial) -> bool:
    """Every nonzero k-tuple occurs exactly once among the N cyclic windows of p."""
    k = h.degree
    if k > PROPERTY1_MAX_K:
        raise TooLarge(f"window census is capped at k <= {PROPERTY1_MAX_K}")
    p = generate_full(h)
    n = len(p)
    ext = np.concatenate([p, p[: k - 1]]).astype(np.int64)
    codes = np.zeros(n, dtype=np.int64)
    for a in range(k):
        codes |= ext[a : a + n] << a
    counts = np.bincount(codes, minlength=1 << k)
    return counts[0] == 0 and bool(np.all(counts[1:] == 1))


def dump_window(h: BinaryPolynomial, start: int, length: int) -> str:
    nav = PnNavigator.at(h, start)
    return "".join(map(str, nav.read(0, length)))
