import numpy as np
import pytest

from p1stab.algebra import section_space
from p1stab.errors import StepTooCoarse
from p1stab.geometry import (
    HermitianForm,
    constant_metric,
    curvature,
    degree_integral,
    fs_metric,
    round_product_metric,
)


def test_round_line_bundle_degree(grid64):
    assert abs(degree_integral(round_product_metric(grid64, (1,))) - 1.0) < 1e-6


def test_flat_metric_curvature_vanishes(grid32):
    f = constant_metric(grid32, np.array([[1.0, 0.2], [0.2, 2.0]]))
    assert np.abs(curvature(f)).max() < 1e-8


def test_fs_identity_degree_zero(grid64):
    sp = section_space((1, -1), 2)
    f = fs_metric(HermitianForm.identity(6), sp, grid64)
    assert abs(degree_integral(f)) < 1e-5


def test_hermitian_einstein_density_for_round(grid32):
    # round metric on O(1): Lambda F = 1 pointwise (mu / Vol = 1)
    f = round_product_metric(grid32, (1,))
    lf = curvature(f)
    assert np.abs(lf[:, 0, 0] - 1.0).max() < 1e-7


def test_degree_integral_random_forms(grid64, rng):
    for degrees, expected in [((1,), 1.0), ((1, -1), 0.0), ((2, 0), 2.0)]:
        sp = section_space(degrees, 2)
        f = fs_metric(HermitianForm.random(sp.dimension, rng), sp, grid64)
        assert abs(degree_integral(f) - expected) < 1e-5


def test_step_too_coarse_guard(grid32, rng):
    sp = section_space((2, 0), 1)
    f = fs_metric(HermitianForm.random(sp.dimension, rng, spread=3.0), sp, grid32)
    with pytest.raises(StepTooCoarse):
        curvature(f, fd_step=0.5)
    # and the default step passes the Richardson check
    curvature(f)


def test_nested_fd_matches_analytic(grid32, rng):
    # strip the analytic derivative and compare the pure-FD pipeline
    from p1stab.geometry.fields import ChartMap, MetricField

    sp = section_space((1, -1), 2)
    f = fs_metric(HermitianForm.random(6, rng), sp, grid32)
    stripped = MetricField(
        grid32,
        f.rank,
        ChartMap(f.chart_z.evaluate),
        ChartMap(f.chart_w.evaluate),
    )
    lf_analytic = curvature(f)
    lf_fd = curvature(stripped, fd_step=1e-3)
    assert np.abs(lf_analytic - lf_fd).max() < 1e-6
