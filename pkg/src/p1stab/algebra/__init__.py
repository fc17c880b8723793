"""Exact rational bundle algebra on the Riemann sphere."""

from .bundles import (
    POLYSTABLE,
    STABLE,
    UNSTABLE,
    MonomialSection,
    SectionSpace,
    SplitBundle,
    classify_split_bundle,
    h0_dimension,
    hilbert_value,
    section_basis,
    section_space,
)
from .filtrations import (
    WeightedFiltration,
    filtration_from_json,
    filtration_to_json,
    load_corpus,
    trivial_filtration,
    two_step_filtration,
)
from .invariants import (
    FiltrationStep,
    SheafInvariants,
    filtration_invariants,
    mna,
    mna_report,
    mna_weighted,
)
from .saturation import (
    SaturationResult,
    generated_subsheaf_rank,
    saturated_invariants,
)

__all__ = [
    "MonomialSection",
    "SectionSpace",
    "SplitBundle",
    "WeightedFiltration",
    "SaturationResult",
    "SheafInvariants",
    "FiltrationStep",
    "STABLE",
    "POLYSTABLE",
    "UNSTABLE",
    "classify_split_bundle",
    "filtration_from_json",
    "filtration_invariants",
    "filtration_to_json",
    "generated_subsheaf_rank",
    "h0_dimension",
    "hilbert_value",
    "load_corpus",
    "mna",
    "mna_report",
    "mna_weighted",
    "saturated_invariants",
    "section_basis",
    "section_space",
    "trivial_filtration",
    "two_step_filtration",
]
