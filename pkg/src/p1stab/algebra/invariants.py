"""Saturated filtration invariants and the non-Archimedean functional.

For each integer level q (weights cleared to integers by j) the cumulative
subspace generates a subsheaf whose saturation carries exact rank and degree.
The non-Archimedean functional is

    mna = (2/j) * sum_q rk(E'_{<=q}) (mu(E) - mu(E'_{<=q})),

summed over the finitely many q with a proper nonzero step, and equals the
weighted graded form of `mna_weighted` identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .filtrations import WeightedFiltration
from .saturation import SaturationResult, saturated_invariants


@dataclass(frozen=True)
class FiltrationStep:
    """Cumulative and graded invariants at one weight level."""

    weight: Fraction
    q_level: int  # -j*w in the integer grading
    rank: int
    degree: int
    graded_rank: int
    graded_degree: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)


@dataclass(frozen=True)
class SheafInvariants:
    """Exact invariants of the saturated filtration induced on E."""

    degrees: tuple[int, ...]
    twist: int
    clearing: int
    steps: tuple[FiltrationStep, ...]
    saturations: tuple[SaturationResult, ...]

    @property
    def bundle_rank(self) -> int:
        return len(self.degrees)

    @property
    def bundle_degree(self) -> int:
        return sum(self.degrees)

    @property
    def bundle_slope(self) -> Fraction:
        return Fraction(self.bundle_degree, self.bundle_rank)

    def cumulative_at(self, q: int) -> tuple[int, int]:
        """(rank, degree) of E'_{<=q} for any integer q."""
        out = (0, 0)
        for step in self.steps:
            if step.q_level <= q:
                out = (step.rank, step.degree)
        return out

    def to_records(self) -> list[dict]:
        return [
            {"q": s.q_level, "rank": s.rank, "degree": s.degree} for s in self.steps
        ]


def filtration_invariants(filt: WeightedFiltration, seed: int | None = None) -> SheafInvariants:
    """Saturated invariants of every cumulative step of the filtration."""
    space = filt.space
    j = filt.denominator_clearing
    int_ws = filt.integer_weights
    kwargs = {} if seed is None else {"seed": seed}

    steps: list[FiltrationStep] = []
    sats: list[SaturationResult] = []
    prev_rank, prev_deg = 0, 0
    for i, w in enumerate(filt.weights):
        sat = saturated_invariants(space, filt.cumulative_basis(i), **kwargs)
        steps.append(
            FiltrationStep(
                weight=w,
                q_level=-int_ws[i],
                rank=sat.rank,
                degree=sat.degree,
                graded_rank=sat.rank - prev_rank,
                graded_degree=sat.degree - prev_deg,
            )
        )
        sats.append(sat)
        prev_rank, prev_deg = sat.rank, sat.degree
    return SheafInvariants(
        degrees=space.bundle.degrees,
        twist=space.twist,
        clearing=j,
        steps=tuple(steps),
        saturations=tuple(sats),
    )


def mna(filt: WeightedFiltration, invariants: SheafInvariants | None = None) -> Fraction:
    """Exact non-Archimedean functional of the filtration."""
    inv = invariants if invariants is not None else filtration_invariants(filt)
    mu = inv.bundle_slope
    total = Fraction(0)
    # step i covers integer levels q in [-jw_i, -jw_{i+1}); the final step is
    # E itself and every later term vanishes, as do all q below the first level
    for i, step in enumerate(inv.steps[:-1]):
        count = inv.steps[i + 1].q_level - step.q_level
        total += count * step.rank * (mu - step.slope)
    return Fraction(2, inv.clearing) * total


def mna_weighted(filt: WeightedFiltration, invariants: SheafInvariants | None = None) -> Fraction:
    """Graded-piece form: -2 sum_i w_i (deg E'_i - mu(E) rk E'_i); equals mna."""
    inv = invariants if invariants is not None else filtration_invariants(filt)
    mu = inv.bundle_slope
    total = Fraction(0)
    for step in inv.steps:
        total += step.weight * (step.graded_degree - mu * step.graded_rank)
    return -2 * total


def mna_report(filt: WeightedFiltration, seed: int | None = None) -> dict:
    """JSON-ready record with both evaluations and their equality flag."""
    inv = filtration_invariants(filt, seed=seed)
    value = mna(filt, inv)
    weighted = mna_weighted(filt, inv)
    norm = filt.max_weight_norm
    normalized = value / norm if norm else Fraction(0)
    return {
        "mna": str(value),
        "mna_weighted": str(weighted),
        "identity_holds": value == weighted,
        "mna_opnorm_normalized": str(normalized),
        "j": inv.clearing,
        "weights": [str(w) for w in filt.weights],
        "steps": inv.to_records(),
        "graded": [
            {"q": s.q_level, "rank": s.graded_rank, "degree": s.graded_degree}
            for s in inv.steps
        ],
    }
