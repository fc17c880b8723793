"""Renormalized limits of the metric path in frames adapted to the filtration.

Away from the finitely many points where a filtration sheaf drops rank, the
sections of the saturations trivialize the filtration fibrewise.  The frame
at a node orthonormalizes those section values against the reference metric
in filtration order, completing block by block; conjugating the path metric
into this frame and undoing the weight gauge exp(sign*w*t) blockwise yields
a path that converges to a positive block-diagonal limit, with off-diagonal
blocks decaying at least like the smallest weight gap per unit time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra.invariants import SheafInvariants
from ..errors import SingularNode
from ..geometry.fields import MetricField, _adjoint
from .bergman_path import BergmanOneParameterSubgroup

FRAME_RANK_RTOL = 1e-8


@dataclass(frozen=True)
class AdaptedFrames:
    node_indices: np.ndarray  # grid indices of usable sample nodes
    frames: np.ndarray  # (n, r, r) frame columns, filtration-ordered blocks
    column_weights: np.ndarray  # (r,) weight of each frame column
    block_bounds: tuple[int, ...]  # cumulative ranks delimiting the blocks
    dropped: int  # sample nodes excluded for fibre rank drop


def build_adapted_frames(
    invariants: SheafInvariants,
    reference: MetricField,
    sample_indices: np.ndarray,
) -> AdaptedFrames:
    """h_ref-orthonormal frames spanning the filtration fibres at the samples."""
    steps = [
        (step, sat)
        for step, sat in zip(invariants.steps, invariants.saturations)
        if step.graded_rank > 0
    ]
    rank = invariants.bundle_rank
    idx = np.asarray(sample_indices, dtype=int)
    coords = reference.coords[idx]
    far = reference.far_mask[idx]
    h = reference.values[idx]
    n = idx.size

    frames = np.zeros((n, rank, 0), dtype=complex)
    valid = np.ones(n, dtype=bool)
    col_w: list[float] = []
    bounds: list[int] = []
    for step, sat in steps:
        space = sat.final_space
        vecs = np.array(
            [[float(c) for c in vec] for vec in sat.final_sections], dtype=complex
        ).T
        cand = np.empty((n, rank, vecs.shape[1]), dtype=complex)
        near = ~far
        if near.any():
            cand[near] = space.evaluation_array(coords[near]) @ vecs
        if far.any():
            cand[far] = space.evaluation_array_mirror(coords[far]) @ vecs
        frames, ok = _extend_frames(h, frames, cand, step.graded_rank)
        valid &= ok
        col_w.extend([float(step.weight)] * step.graded_rank)
        bounds.append(frames.shape[2])

    if not valid.any():
        raise SingularNode("every sample node lies on the singular locus")
    return AdaptedFrames(
        node_indices=idx[valid],
        frames=frames[valid],
        column_weights=np.array(col_w),
        block_bounds=tuple(bounds),
        dropped=int((~valid).sum()),
    )


def _extend_frames(h, frames, cand, count):
    """Pivoted h-orthonormal Gram-Schmidt extension by `count` columns."""
    n, rank = h.shape[0], h.shape[1]
    ok = np.ones(n, dtype=bool)
    current = frames
    for _ in range(count):
        if current.shape[2]:
            proj = current @ (_adjoint(current) @ h @ cand)
            resid = cand - proj
        else:
            resid = cand
        norms = np.real(
            np.einsum("nij,njk,nki->ni", _adjoint(resid), h, resid)
        )
        scale = np.maximum(norms.max(axis=1, keepdims=True), 1e-300)
        best = norms.argmax(axis=1)
        ok &= norms[np.arange(n), best] > FRAME_RANK_RTOL * scale[:, 0]
        pick = resid[np.arange(n), :, best]
        nv = np.sqrt(np.maximum(norms[np.arange(n), best], 1e-300))
        pick = pick / nv[:, None]
        current = np.concatenate([current, pick[:, :, None]], axis=2)
    return current, ok


@dataclass(frozen=True)
class RenormalizedSample:
    t: float
    values: np.ndarray  # (n, r, r) renormalized metric in the adapted frame
    offdiag_sup: float
    min_eig: float


def renormalized_metric(
    bps: BergmanOneParameterSubgroup,
    t: float,
    frames: AdaptedFrames,
    field_t: MetricField,
) -> RenormalizedSample:
    """hat h at time t: undo the weight gauge on the frame metric."""
    fm = _frame_metric(frames, field_t)
    d = np.exp(-bps.sign * frames.column_weights * float(t))
    hat = d[None, :, None] * fm * d[None, None, :]
    off = _offdiag_sup(hat, frames.block_bounds)
    eig = np.linalg.eigvalsh(0.5 * (hat + _adjoint(hat)))
    return RenormalizedSample(
        t=float(t), values=hat, offdiag_sup=off, min_eig=float(eig.min())
    )


def reconstruction_residual(
    bps: BergmanOneParameterSubgroup,
    sample: RenormalizedSample,
    frames: AdaptedFrames,
    field_t: MetricField,
) -> float:
    """Sup-norm of frame_metric - D^{-1} hat h D^{-1}; arithmetic identity."""
    fm = _frame_metric(frames, field_t)
    d = np.exp(bps.sign * frames.column_weights * float(sample.t))
    rebuilt = d[None, :, None] * sample.values * d[None, None, :]
    scale = 1.0 + np.abs(fm).max()
    return float(np.abs(fm - rebuilt).max() / scale)


def _frame_metric(frames: AdaptedFrames, field_t: MetricField) -> np.ndarray:
    h = field_t.values[frames.node_indices]
    return _adjoint(frames.frames) @ h @ frames.frames


def _offdiag_sup(values: np.ndarray, bounds: tuple[int, ...]) -> float:
    mask = np.zeros(values.shape[-2:], dtype=bool)
    start = 0
    for b in bounds:
        mask[start:b, start:b] = True
        start = b
    off = np.abs(values)[:, ~mask]
    return float(off.max()) if off.size else 0.0


def offdiagonal_decay_rate(samples: list[RenormalizedSample], floor: float = 1e-13) -> float:
    """Average decay rate of log offdiag_sup per unit t over the samples.

    Returns +inf when the off-diagonal part is identically negligible
    (summand-aligned filtrations are exactly block diagonal).
    """
    ts = np.array([s.t for s in samples])
    offs = np.array([s.offdiag_sup for s in samples])
    if offs.max() < floor:
        return float("inf")
    good = offs > floor
    if good.sum() < 2:
        return float("inf")
    slope = np.polyfit(ts[good], np.log(offs[good]), 1)[0]
    return float(-slope)
