"""Weighted filtrations of a section space and their constructors.

A filtration is a strictly descending list of rational weights together
with complementary subspaces of H^0(E(k)) spanning the whole space; the
cumulative spans (highest weight first) induce the subsheaf filtration of E.

Trace-zero and the operator-norm bound |w_i| <= 1 are natural normalizations
but are deliberately not enforced: the canonical two-step weights violate
both under integer rescaling, and every invariant computed downstream is
unchanged by a uniform weight shift or positive rescaling of the metric.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..errors import ConfigError, EmptySubspace, TwistTooSmall
from .bundles import SectionSpace, SplitBundle, section_space
from .exactla import Vec, frac, mat_rank, nullspace


@dataclass(frozen=True)
class WeightedFiltration:
    """Weight decomposition of H^0(E(k)) with descending rational weights."""

    space: SectionSpace
    weights: tuple[Fraction, ...]
    subspaces: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if len(self.weights) != len(self.subspaces):
            raise ValueError("one subspace basis per weight required")
        if not self.weights:
            raise ValueError("filtration needs at least one weight")
        ws = tuple(frac(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if any(ws[i] <= ws[i + 1] for i in range(len(ws) - 1)):
            raise ValueError(f"weights must be strictly descending, got {ws}")
        subs = tuple(
            tuple(tuple(frac(c) for c in vec) for vec in basis) for basis in self.subspaces
        )
        object.__setattr__(self, "subspaces", subs)
        n = self.space.dimension
        stacked: list[Vec] = []
        for basis in subs:
            if not basis:
                raise EmptySubspace("every weight subspace must be nonzero")
            for vec in basis:
                if len(vec) != n:
                    raise ValueError(f"coefficient vectors must have length {n}")
                stacked.append(list(vec))
        if len(stacked) != n or mat_rank(stacked) != n:
            raise ValueError("weight subspaces must be complementary and span H0(E(k))")

    @property
    def steps(self) -> int:
        return len(self.weights)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.subspaces)

    @property
    def denominator_clearing(self) -> int:
        """Minimal positive j with j*w_i integral for every i."""
        return lcm(*(w.denominator for w in self.weights))

    @property
    def integer_weights(self) -> tuple[int, ...]:
        j = self.denominator_clearing
        return tuple(int(w * j) for w in self.weights)

    @property
    def weight_trace(self) -> Fraction:
        return sum((w * d for w, d in zip(self.weights, self.dims)), Fraction(0))

    @property
    def is_traceless(self) -> bool:
        return self.weight_trace == 0

    @property
    def max_weight_norm(self) -> Fraction:
        return max(abs(w) for w in self.weights)

    @property
    def is_trivial(self) -> bool:
        return self.steps == 1

    def cumulative_basis(self, step: int) -> list[Vec]:
        """Generators of the step-th cumulative subspace (0-based, inclusive)."""
        out: list[Vec] = []
        for basis in self.subspaces[: step + 1]:
            out.extend(list(v) for v in basis)
        return out

    def scaled(self, c) -> "WeightedFiltration":
        """Filtration with weights multiplied by a positive rational."""
        c = frac(c)
        if c <= 0:
            raise ValueError("scaling must be positive")
        return WeightedFiltration(self.space, tuple(w * c for w in self.weights), self.subspaces)


def trivial_filtration(space: SectionSpace) -> WeightedFiltration:
    n = space.dimension
    eye = tuple(tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n))
    return WeightedFiltration(space, (Fraction(0),), (eye,))


def _basis_vectors_for_factors(space: SectionSpace, factors: set[int]) -> list[tuple[Fraction, ...]]:
    n = space.dimension
    out = []
    for col, mono in enumerate(space.basis):
        if mono.factor in factors:
            out.append(tuple(Fraction(int(i == col)) for i in range(n)))
    return out


def two_step_filtration(bundle: SplitBundle, k: int, selection) -> WeightedFiltration:
    """Two-step filtration H^0(F(k)) inside H^0(E(k)).

    `selection` is either an iterable of summand indices defining a split
    subbundle F, or an explicit list of coefficient vectors spanning the
    high-weight subspace.  Weights are f/N and -(N-f)/N with f = dim of the
    selected subspace and N = h^0(E(k)); the low-weight subspace is the
    orthogonal complement under the exact reference L2 form.
    """
    if k < bundle.regularity:
        raise TwistTooSmall(f"k={k} below regularity {bundle.regularity} of {bundle}")
    space = section_space(bundle.degrees, k)
    n = space.dimension

    vectors: list[tuple[Fraction, ...]]
    if selection and not _looks_like_vectors(selection):
        indices = sorted(set(int(i) for i in selection))
        if any(i < 0 or i >= bundle.rank for i in indices):
            raise ValueError(f"summand indices out of range for {bundle}")
        sub = bundle.sub_bundle(indices)
        if k < sub.regularity:
            raise TwistTooSmall(f"k={k} below regularity {sub.regularity} of {sub}")
        vectors = _basis_vectors_for_factors(space, set(indices))
    else:
        vectors = [tuple(frac(c) for c in v) for v in selection]
        if not vectors:
            raise EmptySubspace("two-step filtration needs a nonzero subspace")

    f = mat_rank([list(v) for v in vectors])
    if f == 0:
        raise EmptySubspace("two-step filtration needs a nonzero subspace")
    if f == n:
        return trivial_filtration(space)

    gram = space.l2_gram_exact()
    pairing_rows = [[v[c] * gram[c] for c in range(n)] for v in vectors]
    complement = nullspace(pairing_rows, n_cols=n)

    w1 = Fraction(f, n)
    w2 = -Fraction(n - f, n)
    return WeightedFiltration(
        space,
        (w1, w2),
        (tuple(vectors), tuple(tuple(v) for v in complement)),
    )


def _looks_like_vectors(selection) -> bool:
    try:
        first = next(iter(selection))
    except TypeError:
        return False
    return isinstance(first, (list, tuple))


# ----------------------------------------------------------------------------
# corpus file format
# ----------------------------------------------------------------------------


def filtration_to_json(filt: WeightedFiltration) -> dict:
    return {
        "bundle": list(filt.space.bundle.degrees),
        "k": filt.space.twist,
        "weights": [str(w) for w in filt.weights],
        "subspaces": [[[str(c) for c in vec] for vec in basis] for basis in filt.subspaces],
    }


def filtration_from_json(obj: dict) -> WeightedFiltration:
    for key in ("bundle", "k", "weights", "subspaces"):
        if key not in obj:
            raise ConfigError(f"filtration record missing field '{key}'")
    try:
        space = section_space(tuple(int(a) for a in obj["bundle"]), int(obj["k"]))
    except TwistTooSmall:
        raise
    except Exception as exc:
        raise ConfigError(f"bad 'bundle'/'k' fields: {exc}") from exc
    try:
        weights = tuple(Fraction(w) for w in obj["weights"])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad 'weights' field: {exc}") from exc
    try:
        subspaces = tuple(
            tuple(tuple(Fraction(c) for c in vec) for vec in basis) for basis in obj["subspaces"]
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad 'subspaces' field: {exc}") from exc
    try:
        return WeightedFiltration(space, weights, subspaces)
    except (ValueError, EmptySubspace) as exc:
        raise ConfigError(f"invalid filtration: {exc}") from exc


def load_corpus(path) -> list[WeightedFiltration]:
    """Load one filtration or a list of them from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    records = data if isinstance(data, list) else [data]
    return [filtration_from_json(rec) for rec in records]
