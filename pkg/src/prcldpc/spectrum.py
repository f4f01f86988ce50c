"""Weight spectra, codeword families and minimum-distance profiles.

Every nonzero codeword of the length-n mother code is a length-n window of
p, so the exact spectrum is a sliding-window weight count over one period.
That is the ground truth for k <= 26. Beyond that the estimator reads p only
near landmarks known to be sparse, plus stretches located by a randomized
low-weight probe.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .code import PrcLdpcCode, build
from .errors import TooLarge
from .gf2poly import BinaryPolynomial, reciprocal
from .pnseq import FULL_MAX_K, PnNavigator, generate_full, pack_bits
from .probe import low_weight_codewords
from .ruler import QualityReport, design_quality, profile

RADIUS_PER_K = 4
EXTRA_WEIGHTS = 4
PROBE_ITERATIONS = 200


@dataclass(frozen=True)
class WeightSpectrum:
    n: int
    k: int
    d: int
    counts: dict[int, int]
    method: str = "exact"
    coverage: float | None = None

    def A(self, w: int) -> int:
        return self.counts.get(w, 0)

    @property
    def a_d(self) -> int:
        return self.counts[self.d]


@lru_cache(maxsize=4)
def _sequence(h: BinaryPolynomial) -> np.ndarray:
    p = generate_full(h)
    p.flags.writeable = False
    return p


def _window_weights(bits: np.ndarray, code: PrcLdpcCode) -> tuple[np.ndarray, np.ndarray]:
    """Weights of every length-n_parent window of `bits`, and which ones satisfy the shortening."""
    n_p, a, b = code.n_parent, code.head, code.tail
    m = len(bits) - n_p + 1
    cs = np.zeros(len(bits) + 1, dtype=np.int32)
    np.cumsum(bits, dtype=np.int32, out=cs[1:])
    w = cs[n_p : n_p + m] - cs[:m]
    valid = np.ones(m, dtype=bool)
    if a:
        valid &= cs[a : a + m] == cs[:m]
    if b:
        valid &= cs[n_p - b : n_p - b + m] == cs[n_p : n_p + m]
    return w, valid


def _default_cap(code: PrcLdpcCode) -> int:
    return code.h.weight + EXTRA_WEIGHTS


def _tally(weights: np.ndarray, cap: int) -> tuple[int, dict[int, int]]:
    d = int(weights.min())
    cap = max(cap, d)
    hist = np.bincount(weights[weights <= cap], minlength=cap + 1)
    counts = {0: 1}
    counts.update({w: int(c) for w, c in enumerate(hist) if w and c})
    return d, counts


def exact_spectrum(code: PrcLdpcCode, w_cap: int | None = None) -> WeightSpectrum:
    """Exact d and A(w) for w <= w_cap (default w_h + 4, never below d)."""
    if code.k_parent > FULL_MAX_K:
        raise TooLarge(f"exact enumeration is capped at k <= {FULL_MAX_K}")
    p = _sequence(code.h)
    ext = np.concatenate([p, p[: code.n_parent - 1]])
    w, valid = _window_weights(ext, code)
    d, counts = _tally(w[valid], _default_cap(code) if w_cap is None else w_cap)
    return WeightSpectrum(code.n, code.k, d, counts, "exact")


@dataclass(frozen=True)
class Region:
    """Anchor of a scanned stretch: p[c : c+k] = state, feature spans [c, c+feature)."""

    name: str
    state: int
    feature: int


def landmark_regions(h: BinaryPolynomial) -> list[Region]:
    prof = profile(h)
    k = prof.k
    hs = reciprocal(h)
    # the isolated-one chain whose gap is the largest separation
    a1 = sum(prof.s[: prof.i_star + 1])
    nav = PnNavigator(h, 1 << (a1 - 1))
    nav.step_backward()
    return [
        Region("h_star", pack_bits(hs[i] for i in range(k)), k + 1),
        Region("weight2", nav.state, k + prof.s_max),
        Region("t1", 1, k),
    ]


def probe_regions(code: PrcLdpcCode, iterations: int, seed: int) -> list[Region]:
    mask = (1 << code.k_parent) - 1
    out = []
    for c in low_weight_codewords(code, iterations=iterations, seed=seed):
        mother = c << code.head
        out.append(Region("probe", mother & mask, code.n_parent))
    return out


def estimate_spectrum(
    code: PrcLdpcCode,
    scan_radius: int | None = None,
    w_cap: int | None = None,
    probe_iterations: int = PROBE_ITERATIONS,
    seed: int = 0,
) -> WeightSpectrum:
    """Distance estimate from windows of p that touch the sparse regions.

    The result only ever contains real codewords, so the reported d is an
    upper bound on the true one. `coverage` is the fraction of the N
    window positions that were inspected.
    """
    h = code.h
    k = code.k_parent
    n_p = code.n_parent
    radius = RADIUS_PER_K * k if scan_radius is None else scan_radius
    regions = landmark_regions(h)
    if probe_iterations:
        regions += probe_regions(code, probe_iterations, seed)
    weights: dict[bytes, int] = {}
    for reg in regions:
        lo = -(radius + n_p - 1)
        hi = reg.feature + radius  # window starts in [lo, hi)
        bits = PnNavigator(h, reg.state).read(lo, hi - lo + n_p - 1)
        w, valid = _window_weights(bits, code)
        heads = np.packbits(sliding_window_view(bits, k)[: len(w)], axis=1)
        for key, wt, ok in zip(map(bytes, heads), w.tolist(), valid.tolist()):
            weights[key] = wt if ok else -1
    good = np.array([w for w in weights.values() if w > 0], dtype=np.int64)
    d, counts = _tally(good, _default_cap(code) if w_cap is None else w_cap)
    coverage = len(weights) / code.period
    return WeightSpectrum(code.n, code.k, d, counts, "estimate", coverage)


def spectrum(code: PrcLdpcCode, method: str = "auto", **kwargs) -> WeightSpectrum:
    if method == "auto":
        method = "exact" if code.k_parent <= FULL_MAX_K else "estimate"
    if method == "exact":
        return exact_spectrum(code, kwargs.get("w_cap"))
    if method == "estimate":
        return estimate_spectrum(code, **kwargs)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class FamilyRecord:
    """A 1-bordered core of p with maximal zero runs on both sides."""

    core_start: int | None
    L: int
    z_left: int
    z_right: int
    w: int

    def count(self, n: int) -> int:
        """Windows of length n that contain the core and nothing else."""
        zl, zr = max(self.z_left, self.z_right), min(self.z_left, self.z_right)
        L = self.L
        if n < L:
            return 0
        if n <= L + zr:
            return n - L + 1
        if n <= L + zl:
            return 1 + zr
        if n <= L + zr + zl:
            return 1 + zr + zl + L - n
        return 0

    @property
    def lifetime(self) -> tuple[int, int]:
        return self.L, self.L + self.z_left + self.z_right


def _family_census_exact(code: PrcLdpcCode, cap: int) -> list[FamilyRecord]:
    p = _sequence(code.h)
    N = len(p)
    n = code.n_parent
    ext = np.concatenate([p, p[: n - 1]])
    w, _ = _window_weights(ext, code)
    starts = np.flatnonzero((w > 0) & (w <= cap))
    ones = np.flatnonzero(p)
    m = len(ones)

    def next_one(i):
        base, r = np.divmod(i, N)
        idx = np.searchsorted(ones, r, "left")
        return base * N + np.where(idx == m, ones[0] + N, ones[idx % m])

    def prev_one(i):
        base, r = np.divmod(i, N)
        idx = np.searchsorted(ones, r, "right") - 1
        return base * N + np.where(idx < 0, ones[-1] - N, ones[idx])

    cs = next_one(starts)
    ce = prev_one(starts + n - 1)
    zl = cs - prev_one(cs - 1) - 1
    zr = next_one(ce + 1) - ce - 1
    seen = {}
    for c, e, a, b, wt in zip((cs % N).tolist(), (ce - cs + 1).tolist(), zl.tolist(), zr.tolist(), w[starts].tolist()):
        seen.setdefault((c, e), FamilyRecord(c, e, a, b, wt))
    return [seen[key] for key in sorted(seen)]


def _zero_run(nav: PnNavigator, forward: bool, limit: int) -> int:
    step = nav.step_forward if forward else nav.step_backward
    run = 0
    while run < limit and not step():
        run += 1
    return run


def _shifted(nav: PnNavigator, delta: int) -> PnNavigator:
    nav = nav.copy()
    for _ in range(-delta):
        nav.step_backward()
    for _ in range(delta):
        nav.step_forward()
    return nav


def _family_census_regions(code: PrcLdpcCode, cap: int, radius: int, probe_iterations: int, seed: int) -> list[FamilyRecord]:
    h, k, n = code.h, code.k_parent, code.n_parent
    out: dict[tuple[int, int], FamilyRecord] = {}
    regions = landmark_regions(h)
    if probe_iterations:
        regions += probe_regions(code, probe_iterations, seed)
    for reg in regions:
        lo = -(radius + n - 1)
        nav0 = PnNavigator(h, reg.state)
        bits = nav0.read(lo, reg.feature + radius - lo + n - 1)
        w, _ = _window_weights(bits, code)
        for s in np.flatnonzero((w > 0) & (w <= cap)).tolist():
            win = bits[s : s + n]
            nz = np.flatnonzero(win)
            c0, c1 = s + int(nz[0]), s + int(nz[-1])
            nav = _shifted(nav0, lo + c0)
            key = (nav.state, c1 - c0 + 1)
            if key in out:
                continue
            zl = _zero_run(nav.copy(), False, 1 << 20)
            # a cursor k-1 places left of c1+1 emits bit c1+1 on its next step
            zr = _zero_run(_shifted(nav, c1 - c0 + 1 - k), True, 1 << 20)
            out[key] = FamilyRecord(nav.position, c1 - c0 + 1, zl, zr, int(win.sum()))
    return sorted(out.values(), key=lambda f: (f.w, f.L, f.core_start or 0))


def family_census(
    code: PrcLdpcCode,
    w_cap: int | None = None,
    scan_radius: int | None = None,
    probe_iterations: int = PROBE_ITERATIONS,
    seed: int = 0,
) -> list[FamilyRecord]:
    """Families whose windows of length n carry weight <= w_cap.

    For k <= 26 the whole period is censused; otherwise only the regions the
    estimator scans are, and core_start is None there.
    """
    if code.z:
        raise ValueError("families are defined on the unshortened mother code")
    cap = _default_cap(code) if w_cap is None else w_cap
    if code.k_parent <= FULL_MAX_K:
        return _family_census_exact(code, cap)
    radius = RADIUS_PER_K * code.k_parent if scan_radius is None else scan_radius
    return _family_census_regions(code, cap, radius, probe_iterations, seed)


@dataclass(frozen=True)
class DistanceProfile:
    k: int
    n_of_d: dict[int, int]
    method: str = "exact"

    @property
    def r_of_d(self) -> dict[int, int]:
        return {d: n - self.k for d, n in self.n_of_d.items()}


def _exact_d_by_n(h: BinaryPolynomial, n_max: int):
    p = _sequence(h)
    N = len(p)
    ext = np.concatenate([p, p[: n_max - 1]])
    cs = np.zeros(len(ext) + 1, dtype=np.int32)
    np.cumsum(ext, dtype=np.int32, out=cs[1:])
    for n in range(h.degree + 1, n_max + 1):
        yield n, int((cs[n : n + N] - cs[:N]).min())


def distance_profile(
    h: BinaryPolynomial,
    d_max: int,
    method: str = "exact",
    n_max: int | None = None,
    **estimate_kwargs,
) -> DistanceProfile:
    """n(d): the shortest mother length whose minimum distance reaches d."""
    k = h.degree
    N = (1 << k) - 1
    if method == "exact":
        if k > FULL_MAX_K:
            raise TooLarge(f"exact profile is capped at k <= {FULL_MAX_K}")
        n_max = N if n_max is None else min(n_max, N)
        series = _exact_d_by_n(h, n_max)
    elif method == "estimate":
        n_max = min(N, n_max or 64 * k)
        series = ((n, estimate_spectrum(build(h, n), **estimate_kwargs).d) for n in range(k + 1, n_max + 1))
    else:
        raise ValueError(f"unknown method {method!r}")
    out: dict[int, int] = {}
    reached = 0
    for n, d in series:
        for dd in range(reached + 1, min(d, d_max) + 1):
            out[dd] = n
        reached = max(reached, d)
        if reached >= d_max:
            break
    return DistanceProfile(k, out, method)


@dataclass(frozen=True)
class BoundReport:
    """Analytic statements that apply to a code, each tagged (i) .. (vi)."""

    n: int
    k: int
    w_h: int
    s_max: int
    quality: QualityReport
    d_is_one: bool
    n_for_d2: int
    d_upper: int | None
    d_upper_sources: tuple[str, ...]
    weight_wh_lower: dict[str, int] = field(default_factory=dict)

    @property
    def a_wh_lower(self) -> int:
        return max(self.weight_wh_lower.values(), default=0)

    def lines(self) -> list[str]:
        out = [
            f"(i) d=1 iff r < s_max: r={self.n - self.k}, s_max={self.s_max}, d=1 is {self.d_is_one}; n(2)={self.n_for_d2}",
        ]
        if self.d_upper is not None:
            out.append(f"d <= {self.d_upper} by {', '.join(self.d_upper_sources)}")
        for name, v in self.weight_wh_lower.items():
            out.append(f"{name}: A({self.w_h}) >= {v}")
        return out


def lemma_bounds(code: PrcLdpcCode) -> BoundReport:
    prof = profile(code.h)
    q = design_quality(prof)
    s, w_h, k = prof.s, prof.w_h, prof.k
    n, r = code.n_parent, code.r
    internal = sum(s[1:-1])
    d_is_one = r < prof.s_max
    uppers: list[tuple[int, str]] = []
    if d_is_one:
        uppers.append((1, "(i)"))
    half_or_more = 2 * k >= n
    if q.flag_a and half_or_more:
        uppers.append((w_h, "(ii)"))
    if n <= 2 * prof.s_max + k - 1 and q.good_practice:
        uppers.append((w_h, "(vi)"))
    counts: dict[str, int] = {}
    if n == 2 * k:
        for side, i in (("first", 0), ("last", len(s) - 1)):
            if s[i] > internal:
                counts[f"(iii) {side}"] = s[i] - internal
        if q.flag_c:
            counts["(iv)"] = s[0] + s[-1] - internal
        for i in q.internal_dominance:
            counts[f"(v) s_{i}"] = s[i] - (k - s[i])
    d_upper = min((u for u, _ in uppers), default=None)
    sources = tuple(src for u, src in uppers if u == d_upper)
    return BoundReport(code.n, code.k, w_h, prof.s_max, q, d_is_one, k + prof.s_max, d_upper, sources, counts)


def spectrum_csv(rows) -> str:
    """rows of (n, d, A(d), method)."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "d", "A(d)", "method"])
    wr.writerows(rows)
    return buf.getvalue()


def families_csv(records) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["core_start", "L", "Z_l", "Z_r", "w"])
    for f in records:
        wr.writerow(["" if f.core_start is None else f.core_start, f.L, f.z_left, f.z_right, f.w])
    return buf.getvalue()
