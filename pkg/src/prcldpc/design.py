"""Search for primitive, sparse, Golomb-supported parity-check polynomials.

Candidates are built from a Golomb ruler G: truncate it at k, choose a
fixed subset S_f (always containing marks 0 and k), screen S_f against the
separation-quality conditions, complete it with S_r, then test primitivity.
Any subset of a Golomb ruler is itself a Golomb ruler, so the RCC holds for
free.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Sequence

from .errors import EmptySearchSpace, MarkMissing
from .gf2poly import BinaryPolynomial, is_primitive
from .ruler import QualityReport, RulerProfile, density_feasible, design_quality, is_golomb, profile


def colex_combinations(items: Sequence[int], r: int) -> Iterator[tuple[int, ...]]:
    """r-subsets of `items` in colexicographic order (largest element varies slowest)."""
    if r == 0:
        yield ()
        return
    for top in range(r - 1, len(items)):
        for rest in colex_combinations(items[:top], r - 1):
            yield rest + (items[top],)


@dataclass(frozen=True)
class SearchSpec:
    k: int
    w_h: int
    w_f: int
    rulers: tuple[tuple[int, ...], ...]
    quality_required: bool = True
    max_results: int | None = None
    first: bool = False

    def validate(self) -> None:
        if self.w_h % 2 == 0:
            raise ValueError("w_h must be odd (primitive polynomials have odd weight)")
        if not 2 <= self.w_f < self.w_h:
            raise ValueError("w_f must satisfy 2 <= w_f < w_h (marks 0 and k are fixed)")
        if not density_feasible(self.w_h, self.k):
            raise EmptySearchSpace(f"C({self.w_h},2) > {self.k}: no Golomb support of that weight fits")


@dataclass
class SearchResult:
    hits: list[BinaryPolynomial] = field(default_factory=list)
    tested: int = 0
    bound: int = 0
    rulers_used: int = 0


def truncate_ruler(G: Sequence[int], k: int) -> tuple[int, ...]:
    if k not in G:
        raise MarkMissing(f"{k} is not a mark of the ruler")
    return tuple(m for m in sorted(G) if m <= k)


def _subset_ok(marks: tuple[int, ...]) -> bool:
    """Quality screen on a partial support; needs at least two internal separations."""
    if len(marks) < 4:
        return True
    return design_quality(RulerProfile.from_support(marks)).good_practice


def run_search(spec: SearchSpec) -> SearchResult:
    spec.validate()
    out = SearchResult()
    seen: set[tuple[int, ...]] = set()
    for G in spec.rulers:
        G = tuple(m - min(G) for m in G)  # rulers are translation invariant
        try:
            Gp = truncate_ruler(G, spec.k)
        except MarkMissing:
            continue
        out.rulers_used += 1
        L = len(Gp)
        out.bound += comb(L, spec.w_f) * comb(L - spec.w_f, spec.w_h - spec.w_f)
        inner = tuple(m for m in Gp if m not in (0, spec.k))
        for mid in colex_combinations(inner, spec.w_f - 2):
            s_f = tuple(sorted((0, spec.k) + mid))
            if spec.quality_required and not _subset_ok(s_f):
                continue
            rest = tuple(m for m in inner if m not in mid)
            for s_r in colex_combinations(rest, spec.w_h - spec.w_f):
                support = tuple(sorted(s_f + s_r))
                if support in seen:
                    continue
                seen.add(support)
                h = BinaryPolynomial.from_exponents(support)
                if spec.quality_required and not design_quality(profile(h)).good_practice:
                    continue
                out.tested += 1
                if is_primitive(h):
                    out.hits.append(h)
                    if spec.first or (spec.max_results and len(out.hits) >= spec.max_results):
                        return out
    if not out.rulers_used:
        raise MarkMissing(f"no ruler has {spec.k} among its marks")
    return out


def search(spec: SearchSpec) -> list[BinaryPolynomial]:
    return run_search(spec).hits


@dataclass(frozen=True)
class ValidationReport:
    primitive: bool
    golomb: bool
    sparse: bool
    quality: QualityReport | None

    @property
    def quality_ok(self) -> bool:
        return self.quality is not None and self.quality.good_practice

    @property
    def all_pass(self) -> bool:
        return self.primitive and self.golomb and self.sparse and self.quality_ok

    def as_dict(self) -> dict:
        d = {"primitive": self.primitive, "golomb": self.golomb, "sparse": self.sparse, "quality": self.quality_ok}
        if self.quality is not None:
            d.update(self.quality.as_dict())
        return d

    def summary(self) -> str:
        return " ".join(f"{key}={'yes' if v else 'no'}" for key, v in self.as_dict().items())


def validate_candidate(h: BinaryPolynomial, spec: SearchSpec | None = None) -> ValidationReport:
    """Evaluate every gate independently; a failing gate never hides the others."""
    prof = profile(h)
    try:
        prim = is_primitive(h)
    except KeyError:
        prim = False
    golomb = is_golomb(prof.e)
    sparse = density_feasible(prof.w_h, prof.k)
    if spec is not None:
        sparse = sparse and prof.w_h == spec.w_h
    quality = design_quality(prof) if prof.w_h >= 3 else None
    return ValidationReport(prim, golomb, sparse, quality)
