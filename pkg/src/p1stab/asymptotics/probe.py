"""Stability dictionary probe: sign of the exact invariant vs fitted slopes.

For every split subbundle F of E (proper nonempty summand subsets, deduped
by degree multiset) the two-step path is run and the fitted slope compared
in sign with the exact invariant.  Rank-one bundles admit no two-step
filtration and report a vacuous corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..algebra.bundles import SplitBundle
from ..algebra.filtrations import two_step_filtration
from ..algebra.invariants import filtration_invariants, mna
from ..geometry.forms import HermitianForm
from ..geometry.grid import QuadratureGrid
from .bergman_path import BergmanOneParameterSubgroup
from .fits import fit_slope
from .runner import run_1ps

ZERO_SLOPE_TOL = 0.1


@dataclass(frozen=True)
class ProbeEntry:
    sub_degrees: tuple[int, ...]
    mna_exact: Fraction
    fitted_slope: float
    agrees: bool

    def to_json(self) -> dict:
        return {
            "sub_bundle": list(self.sub_degrees),
            "mna": str(self.mna_exact),
            "fitted_slope": self.fitted_slope,
            "agrees": self.agrees,
        }


@dataclass(frozen=True)
class CoercivityReport:
    degrees: tuple[int, ...]
    twist: int
    verdict: str
    entries: tuple[ProbeEntry, ...]
    vacuous: bool

    @property
    def all_agree(self) -> bool:
        return all(e.agrees for e in self.entries)

    def to_json(self) -> dict:
        return {
            "bundle": list(self.degrees),
            "k": self.twist,
            "verdict": self.verdict,
            "vacuous": self.vacuous,
            "all_agree": self.all_agree,
            "entries": [e.to_json() for e in self.entries],
        }


def sub_bundle_selections(bundle: SplitBundle) -> list[tuple[int, ...]]:
    """Proper nonempty summand subsets up to degree-multiset equivalence."""
    seen = set()
    out = []
    for size in range(1, bundle.rank):
        for idx in combinations(range(bundle.rank), size):
            key = tuple(sorted(bundle.degrees[i] for i in idx))
            if key in seen:
                continue
            seen.add(key)
            out.append(idx)
    return out


def signs_agree(mna_value: Fraction, slope: float, zero_tol: float = ZERO_SLOPE_TOL) -> bool:
    if mna_value == 0:
        return abs(slope) <= zero_tol
    return slope * float(mna_value) > 0


def coercivity_probe(
    bundle: SplitBundle,
    k: int,
    grid: QuadratureGrid,
    t_grid=None,
    n_s: int = 16,
    seed: int | None = None,
) -> CoercivityReport:
    from ..algebra.bundles import classify_split_bundle

    verdict, _ = classify_split_bundle(bundle)
    selections = sub_bundle_selections(bundle)
    if not selections:
        return CoercivityReport(bundle.degrees, k, verdict, (), vacuous=True)

    if t_grid is None:
        t_grid = np.arange(0.0, 5.01, 0.5)
    entries = []
    for idx in selections:
        filt = two_step_filtration(bundle, k, idx)
        inv = filtration_invariants(filt, seed=seed)
        value = mna(filt, inv)
        bps = BergmanOneParameterSubgroup(filt, HermitianForm.identity(filt.space.dimension))
        result = run_1ps(
            bps, t_grid, grid, n_s=n_s, invariants=inv, with_renorm=False, seed=seed
        )
        report = fit_slope(result.trace, value)
        entries.append(
            ProbeEntry(
                sub_degrees=bundle.sub_bundle(idx).degrees,
                mna_exact=value,
                fitted_slope=report.fitted_slope,
                agrees=signs_agree(value, report.fitted_slope),
            )
        )
    return CoercivityReport(bundle.degrees, k, verdict, tuple(entries), vacuous=False)
