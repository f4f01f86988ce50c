"""Monte Carlo codeword error rates over BPSK + AWGN.

Trials are grouped in fixed-size blocks. Block b of point i draws from a
Philox stream keyed by (seed, i) with counter offset b, so every trial's
randomness depends only on (seed, point, trial). Workers evaluate blocks in
waves; the stopping rule is applied afterwards in block order, which makes
the result independent of how many workers ran.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .code import PrcLdpcCode, format_descriptor, generator_basis
from .codec import DEFAULT_MAX_ITER, DEFAULT_NMS_FACTOR, DecoderGraph, encode_batch, generator_matrix_from_basis
from .errors import InvalidPlan, NoOverlap
from .ruler import rcc_satisfied

DEFAULT_MIN_ERRORS = 100
DEFAULT_MAX_TRIALS = 10**7
DEFAULT_BLOCK = 1000


@dataclass(frozen=True)
class SimPlan:
    code: PrcLdpcCode
    ebn0_db: tuple[float, ...]
    max_trials: int = DEFAULT_MAX_TRIALS
    min_errors: int = DEFAULT_MIN_ERRORS
    seed: int = 0
    algorithm: str = "spa"
    max_iter: int = DEFAULT_MAX_ITER
    nms_factor: float = DEFAULT_NMS_FACTOR
    block_size: int = DEFAULT_BLOCK
    all_zero: bool = False

    def validate(self) -> None:
        grid = list(self.ebn0_db)
        if not grid:
            raise InvalidPlan("empty Eb/N0 grid")
        if not all(math.isfinite(x) for x in grid):
            raise InvalidPlan("Eb/N0 grid must be finite")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidPlan("Eb/N0 grid must be strictly ascending")
        if self.min_errors < 1 or self.max_trials < 1 or self.block_size < 1 or self.max_iter < 1:
            raise InvalidPlan("min_errors, max_trials, block_size and max_iter must be positive")
        if self.algorithm not in ("spa", "minsum", "nms"):
            raise InvalidPlan(f"unknown decoder {self.algorithm!r}")
        if not rcc_satisfied(self.code.h):
            raise InvalidPlan("code violates the row-column constraint")

    def echo(self) -> dict:
        d = asdict(self)
        d["code"] = format_descriptor(self.code).strip().replace("\n", "; ")
        d["n"], d["k"] = self.code.n, self.code.k
        d["ebn0_db"] = list(self.ebn0_db)
        return d


@dataclass(frozen=True)
class PointResult:
    ebn0_db: float
    trials: int
    cw_errors: int
    bit_errors: int
    iter_sum: int

    @property
    def cer(self) -> float:
        return self.cw_errors / self.trials if self.trials else 0.0

    @property
    def cer_ci95(self) -> float:
        """Normal-approximation binomial half-width."""
        if not self.trials:
            return 0.0
        p = self.cer
        return 1.96 * math.sqrt(p * (1 - p) / self.trials)

    @property
    def avg_iters(self) -> float:
        return self.iter_sum / self.trials if self.trials else 0.0


@dataclass(frozen=True)
class SimResult:
    plan: SimPlan
    points: tuple[PointResult, ...]
    workers: int = field(default=1, compare=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["ebn0_db", "trials", "cw_errors", "bit_errors", "cer", "cer_ci95", "avg_iters"])
        for p in self.points:
            wr.writerow([p.ebn0_db, p.trials, p.cw_errors, p.bit_errors, f"{p.cer:.6e}", f"{p.cer_ci95:.3e}", f"{p.avg_iters:.4f}"])
        return buf.getvalue()

    def metadata(self) -> str:
        meta = {"plan": self.plan.echo(), "noise": "sigma^2 = 1/(2 R Eb/N0), LLR = 2y/sigma^2", "rng": "Philox per (seed, point, block)"}
        return json.dumps(meta, indent=2, sort_keys=True)


class _Worker:
    """Per-process state: generator, decoder graph, info positions."""

    def __init__(self, plan: SimPlan):
        self.plan = plan
        basis = generator_basis(plan.code)
        self.G = generator_matrix_from_basis(basis)
        self.info_pos = np.array(basis.pivots)
        self.graph = DecoderGraph.from_code(
            plan.code, algorithm=plan.algorithm, max_iter=plan.max_iter, nms_factor=plan.nms_factor
        )

    def block(self, point: int, block: int) -> tuple[int, int, int, int]:
        plan = self.plan
        code = plan.code
        size = min(plan.block_size, plan.max_trials - block * plan.block_size)
        rng = np.random.Generator(np.random.Philox(key=[plan.seed, point], counter=[0, 0, 0, block]))
        if plan.all_zero:
            info = np.zeros((size, code.k), dtype=np.uint8)
            cw = np.zeros((size, code.n), dtype=np.uint8)
        else:
            info = rng.integers(0, 2, size=(size, code.k), dtype=np.uint8)
            cw = encode_batch(self.G, info)
        ebn0 = 10 ** (plan.ebn0_db[point] / 10)
        sigma2 = 1.0 / (2 * float(code.rate) * ebn0)
        y = 1.0 - 2.0 * cw + math.sqrt(sigma2) * rng.standard_normal(cw.shape)
        hard, iters, _ = self.graph.decode_batch(2 * y / sigma2)
        wrong = hard != cw
        return size, int(wrong.any(axis=1).sum()), int(wrong[:, self.info_pos].sum()), int(iters.sum())


_STATE: _Worker | None = None


def _init(plan: SimPlan) -> None:
    global _STATE
    _STATE = _Worker(plan)


def _job(args):
    return _STATE.block(*args)


def run(plan: SimPlan, workers: int = 1) -> SimResult:
    plan.validate()
    n_blocks = -(-plan.max_trials // plan.block_size)
    pool = ProcessPoolExecutor(workers, initializer=_init, initargs=(plan,)) if workers > 1 else None
    local = None if pool else _Worker(plan)
    points = []
    try:
        for i, eb in enumerate(plan.ebn0_db):
            trials = errs = bits = iters = 0
            b = 0
            stop = False
            while not stop and b < n_blocks:
                wave = list(range(b, min(b + max(workers, 1), n_blocks)))
                if pool:
                    outs = list(pool.map(_job, [(i, j) for j in wave]))
                else:
                    outs = [local.block(i, j) for j in wave]
                for out in outs:  # apply the stopping rule in block order
                    trials += out[0]
                    errs += out[1]
                    bits += out[2]
                    iters += out[3]
                    b += 1
                    if errs >= plan.min_errors:
                        stop = True
                        break
            points.append(PointResult(float(eb), trials, errs, bits, iters))
    finally:
        if pool:
            pool.shutdown()
    return SimResult(plan, tuple(points), workers)


def _crossing(points, level: float) -> float | None:
    pts = sorted((p.ebn0_db, p.cer) for p in points if p.cer > 0)
    lv = math.log10(level)
    for (x0, c0), (x1, c1) in zip(pts, pts[1:]):
        l0, l1 = math.log10(c0), math.log10(c1)
        if min(l0, l1) <= lv <= max(l0, l1):
            if l0 == l1:
                return x0
            return x0 + (lv - l0) * (x1 - x0) / (l1 - l0)
    return None


@dataclass(frozen=True)
class GapReport:
    levels: tuple[float, ...]
    ebn0_a: tuple[float, ...]
    ebn0_b: tuple[float, ...]

    @property
    def gaps_db(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.ebn0_a, self.ebn0_b))


def compare(a, b, levels=(1e-3,), workers: int = 1) -> GapReport:
    """Horizontal distance (dB) from curve a to curve b at each CER level.

    a and b may be SimResult or SimPlan (plans are run first). Curves are
    interpolated linearly in log10(CER) against Eb/N0.
    """
    ra = run(a, workers) if isinstance(a, SimPlan) else a
    rb = ra if b is a else (run(b, workers) if isinstance(b, SimPlan) else b)
    xa, xb = [], []
    for lv in levels:
        ca, cb = _crossing(ra.points, lv), _crossing(rb.points, lv)
        if ca is None or cb is None:
            raise NoOverlap(f"CER level {lv:g} is not bracketed by both curves")
        xa.append(ca)
        xb.append(cb)
    return GapReport(tuple(levels), tuple(xa), tuple(xb))
