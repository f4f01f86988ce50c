"""LFSR encoder and belief-propagation decoder for PRC-LDPC codes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import PrcLdpcCode, generator_basis
from .errors import LengthMismatch

LLR_CLIP = 25.0
DEFAULT_MAX_ITER = 100
DEFAULT_NMS_FACTOR = 0.75
ALGORITHMS = ("spa", "minsum", "nms")


class LfsrEncoder:
    """One shift register of length k_max whose feedback switches follow h.

    While the first k symbols leave the register they are emitted unchanged;
    every later symbol is the XOR of the closed taps. Reconfiguring for
    another code only changes the switch pattern.
    """

    def __init__(self, k_max: int = 128):
        self.k_max = k_max
        self.code: PrcLdpcCode | None = None
        self._taps: list[int] = []
        self._basis = None

    def configure(self, code: PrcLdpcCode) -> "LfsrEncoder":
        if code.k_parent > self.k_max:
            raise ValueError(f"register holds k <= {self.k_max}, code needs {code.k_parent}")
        self.code = code
        self._taps = [t for t in code.support if t < code.k_parent]
        self._basis = generator_basis(code) if code.tail else None
        return self

    @property
    def switches(self) -> list[int]:
        """Closed (1) or open (0) feedback switch per register stage."""
        k = self.code.k_parent
        closed = set(self._taps)
        return [int(i in closed) for i in range(k)]

    def encode(self, info) -> np.ndarray:
        code = self.code
        info = np.asarray(info, dtype=np.uint8)
        if info.shape != (code.k,):
            raise LengthMismatch(f"info has length {info.size}, code dimension is {code.k}")
        if self._basis is not None:
            return _encode_basis(self._basis, info[None, :])[0]
        k, n_p = code.k_parent, code.n_parent
        out = np.zeros(n_p, dtype=np.uint8)
        out[code.head : k] = info  # shortened head symbols stay zero
        reg = [int(b) for b in out[:k]]
        taps = self._taps
        for j in range(k, n_p):
            bit = 0
            for t in taps:
                bit ^= reg[j - k + t]
            reg.append(bit)
        out[:] = reg
        return out[code.head :]


def _encode_basis(basis, info: np.ndarray) -> np.ndarray:
    G = generator_matrix_from_basis(basis)
    return (info.astype(np.int32) @ G.astype(np.int32) & 1).astype(np.uint8)


def generator_matrix_from_basis(basis) -> np.ndarray:
    G = np.zeros((len(basis.rows), basis.n), dtype=np.uint8)
    for i, row in enumerate(basis.rows):
        G[i] = np.unpackbits(
            np.frombuffer(row.to_bytes((basis.n + 7) // 8, "little"), dtype=np.uint8),
            bitorder="little",
        )[: basis.n]
    return G


def generator_matrix(code: PrcLdpcCode) -> np.ndarray:
    """k x n systematic generator; row i is the codeword for info bit i."""
    return generator_matrix_from_basis(generator_basis(code))


def encode(code: PrcLdpcCode, info) -> np.ndarray:
    return LfsrEncoder(max(128, code.k_parent)).configure(code).encode(info)


def encode_batch(G: np.ndarray, info: np.ndarray) -> np.ndarray:
    """Rows of `info` times the generator over GF(2)."""
    return (info.astype(np.float32) @ G.astype(np.float32)).astype(np.int64).__and__(1).astype(np.uint8)


@dataclass
class DecoderGraph:
    n: int
    check_cols: np.ndarray  # (r, dc_max) variable index per check slot, -1 for padding
    algorithm: str = "spa"
    max_iter: int = DEFAULT_MAX_ITER
    nms_factor: float = DEFAULT_NMS_FACTOR

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        self.mask = self.check_cols >= 0
        self.edge_var = self.check_cols[self.mask]
        E = self.edge_var.size
        order = np.argsort(self.edge_var, kind="stable")
        deg = np.bincount(self.edge_var, minlength=self.n)
        dv = int(deg.max()) if E else 0
        # var_edges[v] lists v's edges; padding points at a zero column (index E)
        self.var_edges = np.full((self.n, max(dv, 1)), E, dtype=np.int64)
        starts = np.concatenate([[0], np.cumsum(deg)[:-1]])
        slot = np.arange(E) - np.repeat(starts, deg)
        self.var_edges[self.edge_var[order], slot] = order
        self.gather = np.where(self.mask, self.check_cols, 0)

    @classmethod
    def from_code(cls, code: PrcLdpcCode, **kwargs) -> "DecoderGraph":
        rows = code.check_rows()
        dc = max(len(r) for r in rows)
        cols = np.full((len(rows), dc), -1, dtype=np.int64)
        for i, r in enumerate(rows):
            cols[i, : len(r)] = r
        return cls(code.n, cols, **kwargs)

    @property
    def n_edges(self) -> int:
        return self.edge_var.size

    def syndrome_ok(self, hard: np.ndarray) -> np.ndarray:
        """Per-row flag: every check satisfied by the hard decisions (B, n)."""
        bits = np.where(self.mask, hard[:, self.gather], 0)
        return ~(bits.sum(axis=2) & 1).any(axis=1)

    def _check_update(self, v2c: np.ndarray) -> np.ndarray:
        B = v2c.shape[0]
        r, dc = self.mask.shape
        if self.algorithm == "spa":
            t = np.ones((B, r, dc))
            t[:, self.mask] = np.tanh(np.clip(v2c, -LLR_CLIP, LLR_CLIP) / 2)
            pre = np.ones_like(t)
            suf = np.ones_like(t)
            pre[:, :, 1:] = np.cumprod(t[:, :, :-1], axis=2)
            suf[:, :, :-1] = np.cumprod(t[:, :, :0:-1], axis=2)[:, :, ::-1]
            prod = np.clip((pre * suf)[:, self.mask], -1 + 1e-15, 1 - 1e-15)
            return np.clip(2 * np.arctanh(prod), -LLR_CLIP, LLR_CLIP)
        mag = np.full((B, r, dc), np.inf)
        neg = np.zeros((B, r, dc), dtype=bool)
        mag[:, self.mask] = np.abs(v2c)
        neg[:, self.mask] = v2c < 0
        first = np.argmin(mag, axis=2)
        m1 = np.take_along_axis(mag, first[..., None], axis=2)
        mag2 = mag.copy()
        np.put_along_axis(mag2, first[..., None], np.inf, axis=2)
        m2 = mag2.min(axis=2, keepdims=True)
        excl = np.where(np.arange(dc) == first[..., None], m2, m1)
        parity = neg.sum(axis=2, keepdims=True) & 1
        sign = np.where((parity ^ neg).astype(bool), -1.0, 1.0)
        out = (sign * np.minimum(excl, LLR_CLIP))[:, self.mask]
        if self.algorithm == "nms":
            out = out * self.nms_factor
        return out

    def decode_batch(self, llr: np.ndarray):
        """Flooding BP on each row of `llr` (positive favours bit 0).

        Returns (hard decisions uint8 (B, n), iterations (B,), converged (B,)).
        A row stops at the first iteration whose decisions satisfy every
        check; an exactly-zero posterior counts as undecided.
        """
        llr = np.clip(np.atleast_2d(np.asarray(llr, dtype=np.float64)), -LLR_CLIP, LLR_CLIP)
        B, n = llr.shape
        if n != self.n:
            raise LengthMismatch(f"LLR length {n} does not match code length {self.n}")
        hard = (llr < 0).astype(np.uint8)
        iters = np.zeros(B, dtype=np.int32)
        done = np.zeros(B, dtype=bool)
        active = np.arange(B)
        ch = llr
        c2v = np.zeros((B, self.n_edges))
        total = ch
        for it in range(1, self.max_iter + 1):
            v2c = total[:, self.edge_var] - c2v
            c2v = self._check_update(v2c)
            ext = np.concatenate([c2v, np.zeros((len(active), 1))], axis=1)
            total = ch + ext[:, self.var_edges].sum(axis=2)
            h = (total < 0).astype(np.uint8)
            ok = self.syndrome_ok(h) & (total != 0).all(axis=1)
            hard[active] = h
            iters[active] = it
            done[active] = ok
            keep = ~ok
            if not keep.any():
                break
            active, ch, c2v, total = active[keep], ch[keep], c2v[keep], total[keep]
        return hard, iters, done

    def decode(self, llr):
        hard, iters, done = self.decode_batch(np.asarray(llr)[None, :])
        return hard[0], int(iters[0]), bool(done[0])


def complexity_estimate(n: float, R: float, w_h: float, i_avg: float) -> float:
    """Binary operations per decoded block, n * I_avg * f(<w_c>, R).

    f = 8 (8 <w_c> + 12 R - 11) + <w_c> with <w_c> = (1 - R) w_h; linear in n
    and in w_h, so O(n w_h) per iteration.
    """
    if min(n, R, w_h, i_avg) <= 0:
        raise ValueError("parameters must be positive")
    wc = (1 - R) * w_h
    return n * i_avg * (8 * (8 * wc + 12 * R - 11) + wc)
