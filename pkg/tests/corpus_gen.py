"""Deterministic filtration corpus shared by unit and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from p1stab.algebra import (
    SplitBundle,
    WeightedFiltration,
    section_space,
    two_step_filtration,
)
from p1stab.algebra.exactla import mat_rank

CORPUS_BUNDLES = [
    (0,),
    (3,),
    (-2,),
    (0, 0),
    (1, -1),
    (2, 0),
    (3, 1),
    (2, -1),
    (3, -3),
    (1, 0, -1),
    (2, 0, -2),
    (0, 0, 0),
    (3, 1, -1),
]


def _random_traceless_filtration(space, rng: random.Random) -> WeightedFiltration | None:
    n = space.dimension
    if n < 2:
        return None
    steps = rng.choice([2, 3]) if n >= 3 else 2
    # random composition of n into `steps` positive parts
    cuts = sorted(rng.sample(range(1, n), steps - 1))
    dims = [b - a for a, b in zip([0] + cuts, cuts + [n])]

    for _ in range(40):
        mat = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if mat_rank(mat) == n:
            break
    else:
        return None
    subspaces, start = [], 0
    for d in dims:
        subspaces.append(tuple(tuple(v) for v in mat[start : start + d]))
        start += d

    for _ in range(60):
        ws = [Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3, 4])) for _ in range(steps - 1)]
        total = sum(w * d for w, d in zip(ws, dims[:-1]))
        last = -total / dims[-1]
        weights = ws + [last]
        if len(set(weights)) == steps:
            weights.sort(reverse=True)
            return WeightedFiltration(space, tuple(weights), tuple(subspaces))
    return None


def algebra_corpus(min_count: int = 50) -> list[WeightedFiltration]:
    """Two-step and random traceless filtrations over small split bundles."""
    rng = random.Random(987123)
    out: list[WeightedFiltration] = []
    for degrees in CORPUS_BUNDLES:
        bundle = SplitBundle(degrees)
        k = bundle.regularity
        if bundle.rank > 1:
            seen = set()
            for i in range(bundle.rank):
                key = degrees[i]
                if key in seen:
                    continue
                seen.add(key)
                out.append(two_step_filtration(bundle, k, [i]))
        space = section_space(degrees, k)
        for _ in range(3):
            filt = _random_traceless_filtration(space, rng)
            if filt is not None:
                out.append(filt)
    assert len(out) >= min_count, f"corpus too small: {len(out)}"
    return out
