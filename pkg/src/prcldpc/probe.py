"""Randomized low-weight codeword search (Lee-Brickell information sets).

Used by the large-k distance estimator to locate sparse stretches of p that
the analytic landmarks do not cover. The search is seeded and deterministic.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .code import PrcLdpcCode, generator_basis


def _systematize(rows: list[int], order: list[int]) -> list[int]:
    rows = list(rows)
    k = len(rows)
    rank = 0
    for col in order:
        if rank == k:
            break
        bit = 1 << col
        sel = next((i for i in range(rank, k) if rows[i] & bit), None)
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        piv = rows[rank]
        for i in range(k):
            if i != rank and rows[i] & bit:
                rows[i] ^= piv
        rank += 1
    return rows


def low_weight_codewords(
    code: PrcLdpcCode,
    iterations: int = 200,
    seed: int = 0,
    keep: int = 16,
    max_weight: int | None = None,
) -> list[int]:
    """Lightest codewords met over `iterations` random information sets.

    Each iteration row-reduces the generator on a random column order and
    inspects single rows and pairwise sums. Codewords come back as ints
    (bit j = position j), sorted by weight then value.
    """
    basis = generator_basis(code)
    rows = list(basis.rows)
    rng = np.random.default_rng(seed)
    found: set[int] = set()
    limit = max_weight
    for _ in range(iterations):
        order = [int(c) for c in rng.permutation(code.n)]
        reduced = _systematize(rows, order)
        cands = reduced + [a ^ b for a, b in combinations(reduced, 2)]
        for c in cands:
            w = c.bit_count()
            if c and (limit is None or w <= limit):
                found.add(c)
        if len(found) > 4 * keep:
            best = sorted(found, key=lambda c: (c.bit_count(), c))[:keep]
            found = set(best)
            limit = best[-1].bit_count()
    return sorted(found, key=lambda c: (c.bit_count(), c))[:keep]
