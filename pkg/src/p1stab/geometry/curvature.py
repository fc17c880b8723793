"""Chern curvature of metric fields.

In a holomorphic chart frame the connection form is g = h^{-1} d_z h and
the normalized curvature two-form is F = -(i/2pi) d_zbar(g) dz dzbar.  The
contraction against the round area form is then

    LambdaF(z) = -d_zbar(g)(z) * (1+|z|^2)^2,

an endomorphism whose trace integrates to deg(E) for any metric.  When the
field exposes an analytic d_z h only the final d_zbar is a finite
difference; otherwise the inner derivative is a Richardson-extrapolated
central difference as well.  A delta vs delta/2 comparison guards the step.
"""

from __future__ import annotations

import numpy as np

from ..errors import StepTooCoarse
from .fields import ChartMap, MetricField

RICHARDSON_RTOL = 1e-3


def _connection(chart: ChartMap, step: float):
    """g = h^{-1} d_z h as a batched function of chart coordinates."""
    if chart.connection is not None:
        return chart.connection
    if chart.with_dz is not None:

        def g(c):
            h, dh = chart.with_dz(c)
            return np.linalg.solve(h, dh)

        return g

    def dz_fd(c, delta):
        hp = chart.evaluate(c + delta)
        hm = chart.evaluate(c - delta)
        hpi = chart.evaluate(c + 1j * delta)
        hmi = chart.evaluate(c - 1j * delta)
        return ((hp - hm) - 1j * (hpi - hmi)) / (4.0 * delta)

    def g(c):
        d1 = dz_fd(c, step)
        d2 = dz_fd(c, step / 2.0)
        dh = (4.0 * d2 - d1) / 3.0
        return np.linalg.solve(chart.evaluate(c), dh)

    return g


def _dzbar(fun, c, delta):
    fp = fun(c + delta)
    fm = fun(c - delta)
    fpi = fun(c + 1j * delta)
    fmi = fun(c - 1j * delta)
    return ((fp - fm) + 1j * (fpi - fmi)) / (4.0 * delta)


def lambda_f_chart(
    chart: ChartMap,
    coords: np.ndarray,
    fd_step: float = 1e-4,
    check: bool = True,
) -> np.ndarray:
    """Lambda_omega F at the given chart coordinates, shape (n, r, r)."""
    coords = np.asarray(coords, dtype=complex)
    g = _connection(chart, fd_step)
    d1 = _dzbar(g, coords, fd_step)
    d2 = _dzbar(g, coords, fd_step / 2.0)
    extrap = (4.0 * d2 - d1) / 3.0
    if check:
        scale = 1.0 + float(np.abs(extrap).max())
        if float(np.abs(d1 - d2).max()) > RICHARDSON_RTOL * scale:
            raise StepTooCoarse(
                f"curvature finite difference unstable at step {fd_step}"
            )
    lam2 = ((1.0 + np.abs(coords) ** 2) ** 2)[..., None, None]
    return -extrap * lam2


def curvature(field: MetricField, fd_step: float = 1e-4, check: bool = True) -> np.ndarray:
    """Lambda_omega F at every grid node (chartwise frames), shape (M, r, r)."""
    out = np.empty_like(field.values)
    near = ~field.far_mask
    if near.any():
        out[near] = lambda_f_chart(field.chart(False), field.coords[near], fd_step, check)
    if field.far_mask.any():
        out[field.far_mask] = lambda_f_chart(
            field.chart(True), field.coords[field.far_mask], fd_step, check
        )
    return out


def degree_integral(field: MetricField, fd_step: float = 1e-4, check: bool = True) -> float:
    """Integral of tr F over the sphere; the degree of E for any metric."""
    lf = curvature(field, fd_step=fd_step, check=check)
    return float(np.real(field.grid.integrate(np.trace(lf, axis1=-2, axis2=-1))))
