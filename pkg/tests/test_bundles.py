from fractions import Fraction

import numpy as np
import pytest

from p1stab.algebra import (
    POLYSTABLE,
    STABLE,
    UNSTABLE,
    SplitBundle,
    classify_split_bundle,
    h0_dimension,
    hilbert_value,
    section_basis,
    section_space,
)
from p1stab.algebra.exactla import mat_rank
from p1stab.errors import TwistTooSmall


def test_h0_dimension_examples():
    assert h0_dimension(SplitBundle((3,)), 0) == 4
    assert h0_dimension(SplitBundle((1, -1)), 2) == 6
    assert h0_dimension(SplitBundle((-2,)), 0) == 0


def test_slope_and_regularity():
    e = SplitBundle((2, 0, -1))
    assert e.rank == 3
    assert e.degree == 1
    assert e.slope == Fraction(1, 3)
    assert e.regularity == 1


def test_section_basis_o1():
    s = section_basis(SplitBundle((1,)), 0)
    assert [(m.factor, m.p, m.q) for m in s.basis] == [(0, 1, 0), (0, 0, 1)]
    row = s.evaluation_matrix(Fraction(5, 2))[0]
    assert row == [Fraction(5, 2), Fraction(1)]


def test_section_basis_counts():
    assert section_basis(SplitBundle((0, 0)), 1).dimension == 4
    s = section_basis(SplitBundle((1, -1)), 2)
    assert s.dimension == 6
    assert sum(1 for m in s.basis if m.factor == 0) == 4
    assert sum(1 for m in s.basis if m.factor == 1) == 2


def test_twist_too_small():
    with pytest.raises(TwistTooSmall):
        section_basis(SplitBundle((1, -1)), 0)


def test_dimension_matches_hilbert_polynomial():
    for degrees in [(0,), (3,), (1, -1), (2, 0, -2), (3, 1, 0)]:
        e = SplitBundle(degrees)
        for k in range(e.regularity, e.regularity + 4):
            assert h0_dimension(e, k) == hilbert_value(e, k)
            assert section_basis(e, k).dimension == h0_dimension(e, k)


def test_evaluation_full_rank_at_random_points():
    sp = section_space((1, 0, -1), 2)
    for z in (Fraction(3, 7), Fraction(-11, 5), Fraction(0)):
        assert mat_rank(sp.evaluation_matrix(z)) == 3


def test_evaluation_array_matches_exact():
    sp = section_space((1, -1), 2)
    z = Fraction(-7, 3)
    exact = np.array([[float(x) for x in row] for row in sp.evaluation_matrix(z)])
    batched = sp.evaluation_array(np.array([complex(float(z))]))[0]
    assert np.abs(batched.real - exact).max() < 1e-12


def test_mirror_evaluation_transition():
    # A_w(w) = diag(w^{d_i}) A(1/w)
    sp = section_space((1, -1), 2)
    w = np.array([0.3 + 0.4j])
    aw = sp.evaluation_array_mirror(w)[0]
    az = sp.evaluation_array(1.0 / w)[0]
    scale = np.array([w[0] ** d for d in sp.factor_degrees])
    assert np.abs(aw - scale[:, None] * az).max() < 1e-12


def test_mirror_derivative_finite_difference():
    sp = section_space((2, 0), 1)
    w = np.array([0.21 - 0.77j])
    eps = 1e-6
    fd = (sp.evaluation_array_mirror(w + eps) - sp.evaluation_array_mirror(w - eps)) / (
        2 * eps
    )
    assert np.abs(fd - sp.evaluation_array_mirror_dz(w)).max() < 1e-8


def test_l2_gram_values():
    # <x^p y^q, x^p y^q> = p! q! / (d+1)! on a factor of twisted degree d
    sp = section_space((1,), 0)
    assert sp.l2_gram_exact() == [Fraction(1, 2), Fraction(1, 2)]
    sp3 = section_space((3,), 0)
    assert sp3.l2_gram_exact() == [
        Fraction(6, 24),
        Fraction(2, 24),
        Fraction(2, 24),
        Fraction(6, 24),
    ]


def test_classify():
    assert classify_split_bundle(SplitBundle((3,))) == (STABLE, None)
    assert classify_split_bundle(SplitBundle((0, 0))) == (POLYSTABLE, None)
    verdict, witness = classify_split_bundle(SplitBundle((1, -1)))
    assert verdict == UNSTABLE
    assert witness.degrees == (1,)
