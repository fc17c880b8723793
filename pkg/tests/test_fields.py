import numpy as np
import pytest

from p1stab.algebra import section_space
from p1stab.errors import SingularEvaluation
from p1stab.geometry import (
    HermitianForm,
    conformal_scale,
    constant_metric,
    defining_equation_residual,
    fs_metric,
    geodesic_point,
    round_product_metric,
    scale_metric,
    transition_residual,
)


def test_fs_identity_on_o1_is_round(grid32):
    sp = section_space((1,), 0)
    f = fs_metric(HermitianForm.identity(2), sp, grid32)
    z = np.array([0.0, 0.3 + 0.4j, 2.0 - 1.0j])
    expected = 1.0 / (1.0 + np.abs(z) ** 2)
    assert np.abs(f.chart_z.evaluate(z)[:, 0, 0] - expected).max() < 1e-14


def test_fs_constant_section_scaling(grid32):
    # one constant section s = 1; H-orthonormalizing to s/sqrt(c) forces
    # h = c in the defining equation sum_i s_i (x) s_i^* = Id
    sp = section_space((0,), 0)
    f = fs_metric(HermitianForm(np.array([[2.5]])), sp, grid32)
    assert np.abs(f.values[:, 0, 0] - 2.5).max() < 1e-14
    pts = np.array([0.1 + 0.2j, 1.5 - 0.5j])
    assert (
        defining_equation_residual(HermitianForm(np.array([[2.5]])), sp, f, pts)
        < 1e-14
    )


def test_fs_defining_equation_residual(grid32, rng):
    sp = section_space((1, -1), 2)
    form = HermitianForm.random(6, rng)
    f = fs_metric(form, sp, grid32)
    pts = rng.normal(size=100) + 1j * rng.normal(size=100)
    assert defining_equation_residual(form, sp, f, pts) < 1e-10


def test_fs_dimension_mismatch(grid32):
    sp = section_space((1, -1), 2)
    with pytest.raises(ValueError):
        fs_metric(HermitianForm.identity(5), sp, grid32)


def test_hermitian_form_validation():
    with pytest.raises(ValueError):
        HermitianForm(np.array([[1.0, 2.0], [0.0, 1.0]]))  # not hermitian
    with pytest.raises(ValueError):
        HermitianForm(np.array([[1.0, 0.0], [0.0, -1.0]]))  # not positive


def test_transition_consistency(grid32, rng):
    sp = section_space((1, -1), 2)
    f = fs_metric(HermitianForm.random(6, rng), sp, grid32)
    samples = np.array([0.8 + 0.1j, 1.0 - 0.5j, 0.4 + 0.9j])
    assert transition_residual(f, (1, -1), samples) < 1e-12
    flat = constant_metric(grid32, np.eye(2))
    assert transition_residual(flat, (0, 0), samples) < 1e-15
    rp = round_product_metric(grid32, (2, -1))
    assert transition_residual(rp, (2, -1), samples) < 1e-12


def test_metric_positive_everywhere(grid32, rng):
    sp = section_space((2, 0), 1)
    f = fs_metric(HermitianForm.random(sp.dimension, rng), sp, grid32)
    lo, hi = f.eigenvalue_range()
    assert lo > 0
    assert np.isfinite(hi)


def test_conformal_scale_and_connection(grid32):
    base = round_product_metric(grid32, (2,))
    phi = lambda z: 0.3 * np.real(z) / (1.0 + np.abs(z) ** 2)
    dphi = lambda z: 0.15 * (1.0 + np.abs(z) ** 2 - (z + np.conj(z)) * np.conj(z)) / (
        1.0 + np.abs(z) ** 2
    ) ** 2
    f = conformal_scale(base, phi, dphi)
    z = np.array([0.2 - 0.7j, 1.4 + 0.3j])
    got = f.chart_z.evaluate(z)[:, 0, 0]
    expected = np.exp(phi(z)) * (1.0 + np.abs(z) ** 2) ** (-2.0)
    assert np.abs(got - expected).max() < 1e-14
    # chart pair consistency under the O(2) transition
    assert transition_residual(f, (2,), np.array([0.9 + 0.2j, 1.1 - 0.4j])) < 1e-12


def test_geodesic_point_endpoints(grid32, rng):
    sp = section_space((1, -1), 2)
    h0 = fs_metric(HermitianForm.random(6, rng), sp, grid32)
    h1 = fs_metric(HermitianForm.random(6, rng), sp, grid32)
    assert np.abs(geodesic_point(h1, h0, 0.0).values - h0.values).max() < 1e-12
    assert np.abs(geodesic_point(h1, h0, 1.0).values - h1.values).max() < 1e-10


def test_geodesic_midpoint_of_scaling(grid32):
    h = round_product_metric(grid32, (1, 0))
    hc = scale_metric(h, 0.8)
    mid = geodesic_point(hc, h, 0.5)
    assert np.abs(mid.values - np.exp(0.4) * h.values).max() < 1e-12


def test_geodesic_velocity_constant(grid32, rng):
    # discrete residual of the geodesic equation via velocity differences
    from p1stab.geometry.fields import geodesic_transport, _adjoint

    sp = section_space((1, -1), 2)
    h0 = fs_metric(HermitianForm.random(6, rng), sp, grid32)
    h1 = fs_metric(HermitianForm.random(6, rng), sp, grid32)
    eps = 1e-3

    def velocity_at(s):
        ha = geodesic_point(h1, h0, s).values
        hb = geodesic_point(h1, h0, s + eps).values
        chol, lam, vv = geodesic_transport(ha, hb)
        core = (vv * np.log(lam)[..., None, :]) @ _adjoint(vv)
        return _adjoint(chol @ core @ np.linalg.inv(chol)) / eps

    res = np.abs(velocity_at(0.2) - velocity_at(0.7)).max()
    assert res < 1e-5


def test_singular_evaluation_raises(grid32):
    # a rank-deficient "form" cannot arise, but a bundle evaluated below its
    # span does: mimic by building FS on a space with a degenerate basis mix
    sp = section_space((0, 0), 1)
    f = fs_metric(HermitianForm.identity(4), sp, grid32)
    with pytest.raises(SingularEvaluation):
        # geodesic toward a non-positive endpoint must refuse
        from p1stab.geometry.fields import geodesic_transport

        bad = f.values.copy()
        bad[0] = 0.0
        geodesic_transport(bad, f.values)
