"""Independent brute-force oracle for saturated subsheaf invariants.

Different mathematics from the production path: the rank is certified by
fully symbolic minor vanishing, and the degree by divisor counting on the
wedge of the generating sections.  For a size-r' subset c of generators
with nonzero wedge, the vector of r' x r' row minors factors as
psi_c * (primitive inclusion data), where psi_c is a section of O(d + r'k)
and d is the saturation degree; hence

    d + r'k = deg_z gcd_I(m_{I,c}) + min_I [ sum_{i in I}(a_i + k) - deg_z m_{I,c} ],

the second term being the vanishing order at infinity.  Every admissible
subset must give the same number, which the oracle asserts.
"""

from __future__ import annotations

from itertools import combinations

from p1stab.algebra.bundles import SectionSpace
from p1stab.algebra.exactla import frac, pdeg, pdet, pgcd


def _section_matrix(space: SectionSpace, vectors):
    cols = [space.section_polys([frac(c) for c in v]) for v in vectors]
    return [[cols[j][i] for j in range(len(cols))] for i in range(space.bundle.rank)]


def oracle_rank(space: SectionSpace, vectors) -> int:
    """Largest s with a symbolically nonzero s x s minor."""
    mat = _section_matrix(space, vectors)
    n_rows, n_cols = len(mat), len(mat[0])
    for size in range(min(n_rows, n_cols), 0, -1):
        for rows in combinations(range(n_rows), size):
            for cols in combinations(range(n_cols), size):
                if pdet([[mat[i][j] for j in cols] for i in rows]):
                    return size
    return 0


def oracle_saturated_invariants(space: SectionSpace, vectors) -> tuple[int, int]:
    """(rank, degree) of the saturation, via wedge divisor counting."""
    mat = _section_matrix(space, vectors)
    rank = oracle_rank(space, vectors)
    if rank == 0:
        raise ValueError("zero subspace")
    degs = space.factor_degrees
    n_rows, n_cols = len(mat), len(mat[0])

    candidates = []
    for cols in combinations(range(n_cols), rank):
        minors = []
        for rows in combinations(range(n_rows), rank):
            det = pdet([[mat[i][j] for j in cols] for i in rows])
            d_target = sum(degs[i] for i in rows)
            minors.append((det, d_target))
        if all(not det for det, _ in minors):
            continue  # this subset does not span the generic fibre
        g = []
        inf_order = None
        for det, d_target in minors:
            if not det:
                continue
            g = pgcd(g, det) if g else list(det)
            gap = d_target - pdeg(det)
            inf_order = gap if inf_order is None else min(inf_order, gap)
        candidates.append(pdeg(g) + inf_order)
    if not candidates:
        raise ValueError("no spanning subset found at the certified rank")
    assert all(c == candidates[0] for c in candidates), "inconsistent wedge degrees"
    degree = candidates[0] - rank * space.twist
    return rank, degree
