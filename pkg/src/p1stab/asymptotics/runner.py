"""Driving the metric path: energy traces and limit diagnostics.

The energy along the path accumulates incrementally between consecutive
times through the cocycle property, each increment integrated along the
form geodesic where everything is analytic; this keeps the quadrature error
per step flat instead of growing with the path length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra.invariants import SheafInvariants, filtration_invariants
from ..errors import DivergedMetric
from ..geometry.fields import MetricField, fs_metric
from ..geometry.functionals import donaldson_fs, geodesic_distance
from ..geometry.grid import QuadratureGrid
from .bergman_path import BergmanOneParameterSubgroup
from .renormalize import (
    AdaptedFrames,
    RenormalizedSample,
    build_adapted_frames,
    renormalized_metric,
)

CONDITION_LIMIT = 1e16


@dataclass(frozen=True)
class FunctionalTrace:
    """Time-indexed record of the energy and limit diagnostics along a path."""

    t_values: np.ndarray
    m1_values: np.ndarray
    m2_values: np.ndarray
    mdon_values: np.ndarray
    dist_values: np.ndarray
    renorm_offdiag: Optional[np.ndarray] = None
    renorm_mineig: Optional[np.ndarray] = None

    def __post_init__(self):
        t = np.asarray(self.t_values, dtype=float)
        if t.ndim != 1 or t.size == 0 or np.any(np.diff(t) <= 0):
            raise ValueError("t_values must be strictly increasing")
        for name in ("m1_values", "m2_values", "mdon_values", "dist_values"):
            if np.asarray(getattr(self, name)).shape != t.shape:
                raise ValueError(f"{name} must match t_values in length")

    def rows(self):
        """CSV rows: t, m1, m2, mdon, dist, offdiag_sup, min_eig."""
        off = self.renorm_offdiag
        mineig = self.renorm_mineig
        for i, t in enumerate(self.t_values):
            yield [
                t,
                self.m1_values[i],
                self.m2_values[i],
                self.mdon_values[i],
                self.dist_values[i],
                float("nan") if off is None else off[i],
                float("nan") if mineig is None else mineig[i],
            ]


HEADER = ["t", "m1", "m2", "mdon", "dist", "offdiag_sup", "min_eig"]


@dataclass(frozen=True)
class RunResult:
    trace: FunctionalTrace
    bps: BergmanOneParameterSubgroup
    invariants: SheafInvariants
    frames: Optional[AdaptedFrames]
    renorm_samples: list[RenormalizedSample]
    reference: MetricField
    fields: list[MetricField]


def run_1ps(
    bps: BergmanOneParameterSubgroup,
    t_grid,
    grid: QuadratureGrid,
    n_s: int = 32,
    fd_step: float = 1e-4,
    reference: MetricField | None = None,
    invariants: SheafInvariants | None = None,
    with_renorm: bool = True,
    sample_radius: float = 0.9,
    keep_fields: bool = False,
    seed: int | None = None,
) -> RunResult:
    """Trace the energy, distance and renormalization diagnostics over t_grid."""
    t = np.asarray(list(t_grid), dtype=float)
    if t.size < 1 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must increase strictly from 0")
    space = bps.filtration.space
    mu = float(space.bundle.slope)

    if invariants is None:
        invariants = filtration_invariants(bps.filtration, seed=seed)
    if reference is None:
        reference = fs_metric(bps.base_form, space, grid)

    frames = None
    samples: list[RenormalizedSample] = []
    if with_renorm:
        sample_idx = np.nonzero(grid.interior_mask(sample_radius))[0]
        frames = build_adapted_frames(invariants, reference, sample_idx)

    m1 = [0.0]
    m2 = [0.0]
    mdon = [0.0]
    dist = [0.0]
    offd: list[float] = []
    mineig: list[float] = []
    fields: list[MetricField] = []

    prev_form = bps.base_form
    field_t = reference
    for i, ti in enumerate(t):
        if i > 0:
            form_t = bps.form_at(float(ti))
            field_t = fs_metric(form_t, space, grid)
            if field_t.condition_sup() > CONDITION_LIMIT:
                raise DivergedMetric(
                    f"metric condition number beyond float range at t={ti}; halve the window"
                )
            inc = donaldson_fs(form_t, prev_form, space, grid, mu, n_s=n_s, fd_step=fd_step)
            m1.append(m1[-1] + inc.m1)
            m2.append(m2[-1] + inc.m2)
            mdon.append(mdon[-1] + inc.mdon)
            dist.append(geodesic_distance(field_t, reference))
            prev_form = form_t
        if keep_fields:
            fields.append(field_t)
        if frames is not None:
            sample = renormalized_metric(bps, float(ti), frames, field_t)
            samples.append(sample)
            offd.append(sample.offdiag_sup)
            mineig.append(sample.min_eig)

    trace = FunctionalTrace(
        t_values=t,
        m1_values=np.array(m1),
        m2_values=np.array(m2),
        mdon_values=np.array(mdon),
        dist_values=np.array(dist),
        renorm_offdiag=np.array(offd) if offd else None,
        renorm_mineig=np.array(mineig) if mineig else None,
    )
    return RunResult(trace, bps, invariants, frames, samples, reference, fields)


def subgeodesic_probe(
    bps: BergmanOneParameterSubgroup,
    grid: QuadratureGrid,
    t: float,
    dt: float = 1e-3,
) -> float:
    """Minimum eigenvalue of d_t(h^{-1} d_t h) over the nodes at time t.

    Numerical probe only: positivity would make the path a subgeodesic, a
    property we report but never assert.
    """
    from ..geometry.fields import geodesic_transport, _adjoint

    space = bps.filtration.space
    vals = []
    for tt in (t - dt, t, t + dt):
        vals.append(fs_metric(bps.form_at(tt), space, grid).values)
    hm, h0, hp = vals

    def vel(ha, hb, step):
        # log(hb ha^{-1}) / step is the average velocity in adjoint form
        chol, lam, vv = geodesic_transport(ha, hb)
        core = (vv * np.log(lam)[..., None, :]) @ _adjoint(vv)
        v = chol @ core @ np.linalg.inv(chol)
        return _adjoint(v) / step

    acc = (vel(h0, hp, dt) - vel(hm, h0, dt)) / dt
    sym = 0.5 * (acc + _adjoint(acc))
    return float(np.linalg.eigvalsh(sym).min())
