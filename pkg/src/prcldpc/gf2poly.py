"""Polynomials over GF(2) and primitivity testing.

A polynomial b_n x^n + ... + b_1 x + b_0 is stored as the nonnegative
integer with bit i equal to b_i, so addition is XOR and multiplication by
x is a left shift. Python integers are arbitrary-precision word arrays,
which keeps every operation word-parallel.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import prod
from typing import Iterable, Mapping

from .errors import InvalidPolynomial, MissingFactorization, ParseError, ZeroModulus

FACTOR_TABLE_ENV = "PRCLDPC_FACTOR_TABLE"
TRIAL_DIVISION_MAX_DEGREE = 16


@dataclass(frozen=True, order=True)
class BinaryPolynomial:
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise InvalidPolynomial("coefficient mask must be nonnegative")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "BinaryPolynomial":
        bits = 0
        for e in exponents:
            if e < 0:
                raise InvalidPolynomial(f"negative exponent {e}")
            if bits >> e & 1:
                raise InvalidPolynomial(f"duplicate exponent {e}")
            bits |= 1 << e
        return cls(bits)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int]) -> "BinaryPolynomial":
        """Build from a coefficient sequence indexed from degree 0 upward."""
        bits = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << i
        return cls(bits)

    @classmethod
    def parse(cls, text: str) -> "BinaryPolynomial":
        return parse_polynomial(text)

    @property
    def degree(self) -> int:
        """Degree of the highest set coefficient; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def exponents(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def coefficients(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __bool__(self):
        return self.bits != 0

    def __add__(self, other):
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other):
        return BinaryPolynomial(_mul(self.bits, _bits(other)))

    def __divmod__(self, other):
        return divmod_(self, other)

    def __floordiv__(self, other):
        return divmod_(self, other)[0]

    def __mod__(self, other):
        return divmod_(self, other)[1]

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"BinaryPolynomial({format_polynomial(self) or '0'!r})"


ZERO = BinaryPolynomial(0)
ONE = BinaryPolynomial(1)
X = BinaryPolynomial(2)


def _bits(p) -> int:
    return p.bits if isinstance(p, BinaryPolynomial) else int(p)


def _mul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    c = 0
    while b:
        low = b & -b
        c ^= a << (low.bit_length() - 1)
        b ^= low
    return c


def _mod(a: int, m: int) -> int:
    if m == 0:
        raise ZeroModulus("division by the zero polynomial")
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _divmod(a: int, m: int) -> tuple[int, int]:
    if m == 0:
        raise ZeroModulus("division by the zero polynomial")
    dm = m.bit_length()
    q = 0
    while a.bit_length() >= dm:
        shift = a.bit_length() - dm
        q |= 1 << shift
        a ^= m << shift
    return q, a


def _mulmod(a: int, b: int, m: int) -> int:
    # shift-and-add with reduction at every step keeps operands below deg(m)
    dm = m.bit_length() - 1
    if dm == 0:
        return 0
    a = _mod(a, m)
    top = 1 << dm
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= m
    return r


def _powmod(a: int, e: int, m: int) -> int:
    r = _mod(1, m)
    a = _mod(a, m)
    while e:
        if e & 1:
            r = _mulmod(r, a, m)
        e >>= 1
        if e:
            a = _mulmod(a, a, m)
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def add(a: BinaryPolynomial, b: BinaryPolynomial) -> BinaryPolynomial:
    return BinaryPolynomial(_bits(a) ^ _bits(b))


def mul_mod(a: BinaryPolynomial, b: BinaryPolynomial, m: BinaryPolynomial) -> BinaryPolynomial:
    """(a*b) mod m; raises ZeroModulus when m is zero."""
    mb = _bits(m)
    if mb == 0:
        raise ZeroModulus("modulus is the zero polynomial")
    return BinaryPolynomial(_mulmod(_bits(a), _bits(b), mb))


def pow_mod(a: BinaryPolynomial, e: int, m: BinaryPolynomial) -> BinaryPolynomial:
    mb = _bits(m)
    if mb == 0:
        raise ZeroModulus("modulus is the zero polynomial")
    return BinaryPolynomial(_powmod(_bits(a), e, mb))


def divmod_(num: BinaryPolynomial, den: BinaryPolynomial) -> tuple[BinaryPolynomial, BinaryPolynomial]:
    q, r = _divmod(_bits(num), _bits(den))
    return BinaryPolynomial(q), BinaryPolynomial(r)


def gcd(a: BinaryPolynomial, b: BinaryPolynomial) -> BinaryPolynomial:
    return BinaryPolynomial(_gcd(_bits(a), _bits(b)))


def reciprocal(h: BinaryPolynomial) -> BinaryPolynomial:
    """x^k h(1/x): coefficient vector reversed over 0..deg(h)."""
    if h.is_zero():
        raise InvalidPolynomial("the zero polynomial has no reciprocal")
    k = h.degree
    return BinaryPolynomial.from_exponents(k - e for e in h.exponents())


def _prime_divisors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(h: BinaryPolynomial) -> bool:
    """Rabin's test: x^(2^k) = x mod h and gcd(x^(2^(k/q)) - x, h) = 1 for primes q | k."""
    k = h.degree
    if k < 1:
        raise InvalidPolynomial("irreducibility is defined for degree >= 1")
    m = h.bits
    if k == 1:
        return True
    if not m & 1:
        return False

    def frobenius(times):
        t = 2
        for _ in range(times):
            t = _mulmod(t, t, m)
        return t

    if frobenius(k) != 2:
        return False
    for q in _prime_divisors(k):
        if _gcd(m, frobenius(k // q) ^ 2) != 1:
            return False
    return True


def is_irreducible_trial(h: BinaryPolynomial) -> bool:
    """Exhaustive trial division by every polynomial of degree 1..k//2."""
    k = h.degree
    if k < 1:
        raise InvalidPolynomial("irreducibility is defined for degree >= 1")
    if k > TRIAL_DIVISION_MAX_DEGREE:
        raise ValueError(f"trial division limited to degree <= {TRIAL_DIVISION_MAX_DEGREE}")
    m = h.bits
    for d in range(2, 1 << (k // 2 + 1)):
        if _mod(m, d) == 0:
            return False
    return True


class MersenneFactorTable(Mapping):
    """Prime factorizations of 2^k - 1, keyed by k.

    Every entry is checked by multiplying its primes back together, so a
    corrupted table is rejected at load time.
    """

    def __init__(self, factors: Mapping[int, list[int]]):
        self._factors = {}
        for k, primes in factors.items():
            primes = sorted(int(p) for p in primes)
            if prod(primes) != (1 << k) - 1:
                raise ValueError(f"factor table entry for k={k} does not multiply to 2^{k}-1")
            self._factors[int(k)] = primes

    @classmethod
    def parse(cls, text: str) -> "MersenneFactorTable":
        factors = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            head, sep, tail = line.partition(":")
            if not sep:
                raise ParseError("expected 'k: p1 p2 ...'", lineno)
            try:
                k = int(head)
                factors[k] = [int(tok) for tok in tail.split()]
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        return cls(factors)

    @classmethod
    def load(cls, path=None) -> "MersenneFactorTable":
        path = path or os.environ.get(FACTOR_TABLE_ENV)
        if path:
            with open(path) as fh:
                return cls.parse(fh.read())
        return default_factor_table()

    def prime_factors(self, k: int) -> list[int]:
        """Distinct primes dividing 2^k - 1."""
        return sorted(set(self[k]))

    def __getitem__(self, k):
        try:
            return self._factors[k]
        except KeyError:
            raise MissingFactorization(f"no factorization of 2^{k}-1 in the table") from None

    def __iter__(self):
        return iter(self._factors)

    def __len__(self):
        return len(self._factors)


@lru_cache(maxsize=1)
def default_factor_table() -> MersenneFactorTable:
    env = os.environ.get(FACTOR_TABLE_ENV)
    if env:
        with open(env) as fh:
            return MersenneFactorTable.parse(fh.read())
    text = resources.files("prcldpc.data").joinpath("mersenne_factors.txt").read_text()
    return MersenneFactorTable.parse(text)


def is_primitive(h: BinaryPolynomial, factors: MersenneFactorTable | None = None) -> bool:
    """True iff h is irreducible and x has multiplicative order 2^k - 1 modulo h."""
    k = h.degree
    if k < 1:
        raise InvalidPolynomial("primitivity is defined for degree >= 1")
    if factors is None:
        factors = default_factor_table()
    primes = factors.prime_factors(k)
    if not is_irreducible(h):
        return False
    order = (1 << k) - 1
    m = h.bits
    for p in primes:
        if _powmod(2, order // p, m) == 1:
            return False
    return True


def parse_polynomial(text: str) -> BinaryPolynomial:
    """Parse "0,1,5,11,13" (set exponents) or a "0x..." coefficient bitmask."""
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", column=1)
    if s.lower().startswith("0x"):
        try:
            return BinaryPolynomial(int(s, 16))
        except ValueError:
            raise ParseError(f"bad hexadecimal mask {s!r}", column=1) from None
    exps = []
    col = 1
    for tok in s.split(","):
        t = tok.strip()
        if not t.isdigit():
            raise ParseError(f"bad exponent {tok!r}", column=col)
        e = int(t)
        if e in exps:
            raise ParseError(f"duplicate exponent {e}", column=col)
        exps.append(e)
        col += len(tok) + 1
    return BinaryPolynomial.from_exponents(exps)


def format_polynomial(p: BinaryPolynomial) -> str:
    return ",".join(str(e) for e in p.exponents())


def format_algebraic(p: BinaryPolynomial) -> str:
    terms = []
    for e in p.exponents():
        terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return "+".join(terms) or "0"
