"""Hermitian metrics on E sampled on a quadrature grid.

A MetricField carries the r x r positive matrices h(z) in a chart frame at
every grid node together with batched evaluators for off-grid points
(finite differences, path quadrature).  Fubini-Study fields additionally
expose the analytic holomorphic derivative of h, which keeps the curvature
pipeline at a single finite difference.

Fields are stored chartwise: nodes with |z| <= 1 use the z-chart frame and
the remaining nodes the mirror chart w = 1/z, where the metric of the split
factor O(a) picks up |w|^(-2a).  Every integrand downstream (curvature
traces, log-determinants, distance densities) is frame-invariant, so the
per-node chart choice never leaks out; it only keeps finite differences at
the far nodes well conditioned.

All metrics are metrics on E itself: the k-twist of a Fubini-Study
construction is divided out, so curvature integrals see deg(E).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..algebra.bundles import SectionSpace
from ..errors import SingularEvaluation
from .forms import HermitianForm
from .grid import QuadratureGrid

Evaluator = Callable[[np.ndarray], np.ndarray]
AnalyticPair = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class ChartMap:
    """Metric evaluation in one chart.

    `evaluate` returns h(c); `with_dz` optionally returns (h, dh/dc); and
    `connection` optionally returns g = h^{-1} dh/dc directly, which the
    curvature pipeline prefers (for Fubini-Study metrics it is evaluated in
    a factored form that stays accurate for badly conditioned forms).
    """

    evaluate: Evaluator
    with_dz: Optional[AnalyticPair] = None
    connection: Optional[Evaluator] = None


def chart_coordinates(grid: QuadratureGrid) -> tuple[np.ndarray, np.ndarray]:
    """(coords, far_mask): chart coordinate per node, mirror chart when |z|>1."""
    z = grid.nodes
    far = np.abs(z) > 1.0
    coords = np.where(far, 1.0 / np.where(far, z, 1.0), z)
    return coords, far


@dataclass(frozen=True)
class MetricField:
    grid: QuadratureGrid
    rank: int
    chart_z: ChartMap
    chart_w: Optional[ChartMap] = None
    values: np.ndarray = field(init=False, repr=False)
    coords: np.ndarray = field(init=False, repr=False)
    far_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        coords, far = chart_coordinates(self.grid)
        if self.chart_w is None:
            coords, far = self.grid.nodes.copy(), np.zeros(self.grid.size, dtype=bool)
        vals = np.empty((self.grid.size, self.rank, self.rank), dtype=complex)
        near = ~far
        if near.any():
            vals[near] = self.chart_z.evaluate(coords[near])
        if far.any():
            vals[far] = self.chart_w.evaluate(coords[far])
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "far_mask", far)

    def chart(self, far: bool) -> ChartMap:
        if far and self.chart_w is not None:
            return self.chart_w
        return self.chart_z

    def eigenvalue_range(self) -> tuple[float, float]:
        eig = np.linalg.eigvalsh(self.values)
        return float(eig.min()), float(eig.max())

    def condition_sup(self) -> float:
        eig = np.linalg.eigvalsh(self.values)
        return float((eig[..., -1] / eig[..., 0]).max())

    def log_det(self) -> np.ndarray:
        return np.linalg.slogdet(self.values)[1]

    def snapshot_rows(self):
        """Rows for the CSV snapshot format: index, rho, theta, r^2 entries."""
        g = self.grid
        for idx in range(g.size):
            yield [idx, g.rho[idx], g.theta[idx], *self.values[idx].reshape(-1)]


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def _adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _fs_factor_qr(space: SectionSpace, factor: np.ndarray, mirror: bool, c: np.ndarray):
    """Per-node QR data of B(c) = A(c) @ C, with M = B B* = R* R."""
    if mirror:
        a = space.evaluation_array_mirror(c)
        da = space.evaluation_array_mirror_dz(c)
    else:
        a = space.evaluation_array(c)
        da = space.evaluation_array_dz(c)
    b = a @ factor
    q, r = np.linalg.qr(_adjoint(b))
    diag = np.abs(np.diagonal(r, axis1=-2, axis2=-1))
    if diag.min() <= 1e-150 * max(diag.max(), 1.0):
        raise SingularEvaluation("evaluation matrix lost rank at a node")
    return b, da @ factor, q, r


def fs_chart_map(space: SectionSpace, factor: np.ndarray, mirror: bool) -> ChartMap:
    """Chart functions of FS(H) built from a factor C with H^{-1} = C C*.

    h = (1+|c|^2)^k M^{-1} with M = B B*, B = A C; everything is evaluated
    through one QR of B* per node, so accuracy degrades with cond(B) rather
    than cond(M) along badly pinched form paths.
    """
    k = space.twist

    def qr_parts(c):
        c = np.asarray(c, dtype=complex)
        return c, _fs_factor_qr(space, factor, mirror, c)

    def evaluate(c):
        c, (_, _, _, r) = qr_parts(c)
        rinv = np.linalg.inv(r)
        lam = (1.0 + np.abs(c) ** 2)[..., None, None]
        return lam**k * _hermitize(rinv @ _adjoint(rinv))

    def connection(c):
        c, (_, db, q, r) = qr_parts(c)
        dmm = db @ q @ _adjoint(np.linalg.inv(r))
        lam = 1.0 + np.abs(c) ** 2
        tw = (k * np.conj(c) / lam)[..., None, None]
        eye = np.eye(space.bundle.rank, dtype=complex)
        return tw * eye - dmm

    def with_dz(c):
        c, (_, db, q, r) = qr_parts(c)
        rinv = np.linalg.inv(r)
        minv = _hermitize(rinv @ _adjoint(rinv))
        dmm = db @ q @ _adjoint(rinv)
        lam = (1.0 + np.abs(c) ** 2)[..., None, None]
        h = lam**k * minv
        dh = (k * np.conj(c)[..., None, None]) * lam ** (k - 1) * minv - lam**k * (
            minv @ dmm
        )
        return h, dh

    return ChartMap(evaluate, with_dz, connection)


def fs_metric(form: HermitianForm, space: SectionSpace, grid: QuadratureGrid) -> MetricField:
    """Fubini-Study metric FS(H) on E: h = (1+|z|^2)^k (A H^{-1} A*)^{-1}.

    A(z) is the evaluation matrix of the reference (monomial) basis, so the
    identity form reproduces the round metric on a line bundle at k = 0.
    The mirror chart uses the reversed monomial powers and is the exact
    transition transform of the z-chart expression.
    """
    if form.dim != space.dimension:
        raise ValueError(f"form dimension {form.dim} != dim H0(E(k)) = {space.dimension}")
    factor = form.inverse_factor()
    return MetricField(
        grid,
        space.bundle.rank,
        fs_chart_map(space, factor, False),
        fs_chart_map(space, factor, True),
    )


def constant_metric(grid: QuadratureGrid, matrix: np.ndarray) -> MetricField:
    """Constant metric; globally flat, so the bundle is O(0)^r."""
    m = np.asarray(matrix, dtype=complex)
    rank = m.shape[0]

    def pair(c):
        c = np.asarray(c, dtype=complex)
        h = np.broadcast_to(m, c.shape + m.shape).copy()
        return h, np.zeros_like(h)

    chart = ChartMap(lambda c: pair(c)[0], pair)
    return MetricField(grid, rank, chart, chart)


def round_product_metric(grid: QuadratureGrid, degrees) -> MetricField:
    """diag((1+|z|^2)^(-a_i)): the round metric on each split factor.

    The mirror chart has the same closed form by symmetry.
    """
    degs = tuple(int(a) for a in degrees)
    rank = len(degs)

    def pair(c):
        c = np.asarray(c, dtype=complex)
        lam = 1.0 + np.abs(c) ** 2
        h = np.zeros(c.shape + (rank, rank), dtype=complex)
        dh = np.zeros_like(h)
        for i, a in enumerate(degs):
            h[..., i, i] = lam ** (-a)
            dh[..., i, i] = -a * np.conj(c) * lam ** (-a - 1)
        return h, dh

    chart = ChartMap(lambda c: pair(c)[0], pair)
    return MetricField(grid, rank, chart, chart)


def conformal_scale(
    base: MetricField,
    phi: Callable[[np.ndarray], np.ndarray],
    dphi_dz: Callable[[np.ndarray], np.ndarray] | None = None,
) -> MetricField:
    """e^{phi(z)} h(z) for a scalar chart function phi of the z coordinate."""

    def wrap(chart: ChartMap, mirror: bool) -> ChartMap:
        def to_z(c):
            return 1.0 / c if mirror else c

        def evaluate(c):
            c = np.asarray(c, dtype=complex)
            return np.exp(phi(to_z(c)))[..., None, None] * chart.evaluate(c)

        def chart_dphi(c):
            zc = to_z(c)
            dphi = dphi_dz(zc)
            if mirror:
                dphi = dphi * (-zc**2)  # d/dw phi(1/w) with z = 1/w
            return dphi

        with_dz = None
        if chart.with_dz is not None and dphi_dz is not None:

            def with_dz(c):
                c = np.asarray(c, dtype=complex)
                h, dh = chart.with_dz(c)
                w = np.exp(phi(to_z(c)))[..., None, None]
                return w * h, w * (dh + chart_dphi(c)[..., None, None] * h)

        connection = None
        if chart.connection is not None and dphi_dz is not None:

            def connection(c):
                c = np.asarray(c, dtype=complex)
                g = chart.connection(c)
                eye = np.eye(g.shape[-1], dtype=complex)
                return g + chart_dphi(c)[..., None, None] * eye

        return ChartMap(evaluate, with_dz, connection)

    return MetricField(
        base.grid,
        base.rank,
        wrap(base.chart_z, False),
        wrap(base.chart_w, True) if base.chart_w is not None else None,
    )


def scale_metric(base: MetricField, log_factor: float) -> MetricField:
    """Constant rescaling e^c h."""
    c = float(log_factor)
    return conformal_scale(
        base,
        lambda z: np.full(np.shape(z), c, dtype=float),
        (lambda z: np.zeros(np.shape(z), dtype=complex)),
    )


def geodesic_transport(h0_vals: np.ndarray, h1_vals: np.ndarray):
    """Batched (L, eigvals, eigvecs) with h_s = L (V diag(lam^s) V*) L*."""
    try:
        chol = np.linalg.cholesky(h0_vals)
    except np.linalg.LinAlgError as exc:
        raise SingularEvaluation("geodesic endpoint is not positive definite") from exc
    cinv = np.linalg.inv(chol)
    s = cinv @ h1_vals @ _adjoint(cinv)
    lam, v = np.linalg.eigh(_hermitize(s))
    if lam.min() <= 0:
        raise SingularEvaluation("geodesic endpoints are not positive definite")
    return chol, lam, v


def geodesic_point(h1: MetricField, h0: MetricField, s: float) -> MetricField:
    """Point h_s = exp(s log(h1 h0^{-1})) h0 of the connecting geodesic."""
    if h1.rank != h0.rank:
        raise ValueError("geodesic endpoints must share the bundle rank")
    if h1.grid is not h0.grid:
        raise ValueError("geodesic endpoints must share the grid")
    s = float(s)

    def make(chart0: ChartMap, chart1: ChartMap) -> ChartMap:
        def evaluate(c):
            c = np.asarray(c, dtype=complex)
            chol, lam, v = geodesic_transport(chart0.evaluate(c), chart1.evaluate(c))
            core = (v * (lam**s)[..., None, :]) @ _adjoint(v)
            return _hermitize(chol @ core @ _adjoint(chol))

        return ChartMap(evaluate, None)

    chart_w = None
    if h0.chart_w is not None and h1.chart_w is not None:
        chart_w = make(h0.chart_w, h1.chart_w)
    return MetricField(h0.grid, h0.rank, make(h0.chart_z, h1.chart_z), chart_w)


def transition_residual(field: MetricField, degrees, samples: np.ndarray) -> float:
    """Consistency of the two chart expressions under the O(a_i) transition.

    h_w(w) must equal T^{-*} h_z(1/w) T^{-1} with T = diag(w^{a_i}) at any
    overlap point; returns the sup-norm of the mismatch over the samples.
    """
    if field.chart_w is None:
        raise ValueError("field has no mirror-chart evaluator")
    w = np.asarray(samples, dtype=complex)
    hz = field.chart_z.evaluate(1.0 / w)
    hw = field.chart_w.evaluate(w)
    degs = np.asarray(degrees, dtype=float)
    t = w[..., None] ** degs  # row scaling w^{a_i}
    predicted = hz / (np.conj(t)[..., :, None] * t[..., None, :])
    return float(np.abs(hw - predicted).max())
