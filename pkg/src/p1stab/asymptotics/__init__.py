"""Metric path asymptotics: runs, renormalized limits, slope fits."""

from .bergman_path import CALIBRATION_SIGN, BergmanOneParameterSubgroup
from .fits import (
    SlopeFitReport,
    distance_divergence_check,
    fit_slope,
    sandwich_constants,
)
from .probe import CoercivityReport, ProbeEntry, coercivity_probe, sub_bundle_selections
from .renormalize import (
    AdaptedFrames,
    RenormalizedSample,
    build_adapted_frames,
    offdiagonal_decay_rate,
    reconstruction_residual,
    renormalized_metric,
)
from .runner import HEADER, FunctionalTrace, RunResult, run_1ps, subgeodesic_probe

__all__ = [
    "AdaptedFrames",
    "BergmanOneParameterSubgroup",
    "CALIBRATION_SIGN",
    "CoercivityReport",
    "FunctionalTrace",
    "HEADER",
    "ProbeEntry",
    "RenormalizedSample",
    "RunResult",
    "SlopeFitReport",
    "build_adapted_frames",
    "coercivity_probe",
    "distance_divergence_check",
    "fit_slope",
    "offdiagonal_decay_rate",
    "reconstruction_residual",
    "renormalized_metric",
    "run_1ps",
    "sandwich_constants",
    "sub_bundle_selections",
    "subgeodesic_probe",
]
