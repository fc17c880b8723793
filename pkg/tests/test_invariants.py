import time
from fractions import Fraction

from p1stab.algebra import (
    SplitBundle,
    WeightedFiltration,
    filtration_invariants,
    mna,
    mna_report,
    mna_weighted,
    section_space,
    trivial_filtration,
    two_step_filtration,
)

from corpus_gen import algebra_corpus


def test_filtration_invariants_calibration():
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    inv = filtration_invariants(filt)
    assert [(s.q_level, s.rank, s.degree) for s in inv.steps] == [(-2, 1, 1), (1, 2, 0)]
    # between the levels the cumulative sheaf is constant
    assert inv.cumulative_at(-2) == (1, 1)
    assert inv.cumulative_at(-1) == (1, 1)
    assert inv.cumulative_at(0) == (1, 1)
    assert inv.cumulative_at(1) == (2, 0)
    assert inv.cumulative_at(-3) == (0, 0)


def test_trivial_filtration_invariants():
    inv = filtration_invariants(trivial_filtration(section_space((1, -1), 2)))
    assert [(s.rank, s.degree) for s in inv.steps] == [(2, 0)]


def test_mna_examples():
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    assert mna(filt) == -2
    # cross-check against rk(F)(mu(E) - mu(F)) * 2
    assert mna(filt) == 2 * 1 * (Fraction(0) - Fraction(1))

    assert mna(trivial_filtration(section_space((1, -1), 2))) == 0

    flat = two_step_filtration(SplitBundle((0, 0)), 1, [0])
    assert mna(flat) == 0


def test_mna_weighted_identity_on_examples():
    for filt in (
        two_step_filtration(SplitBundle((1, -1)), 2, [0]),
        trivial_filtration(section_space((1, -1), 2)),
        two_step_filtration(SplitBundle((0, 0)), 1, [0]),
        two_step_filtration(SplitBundle((2, 0, -2)), 2, [0, 1]),
    ):
        inv = filtration_invariants(filt)
        assert mna(filt, inv) == mna_weighted(filt, inv)


def test_lemma_identity_on_corpus():
    start = time.time()
    corpus = algebra_corpus(50)
    for filt in corpus:
        inv = filtration_invariants(filt)
        assert mna(filt, inv) == mna_weighted(filt, inv), filt.weights
        # rank additivity: graded ranks sum to rk(E)
        assert sum(s.graded_rank for s in inv.steps) == inv.bundle_rank
    assert time.time() - start < 30.0


def test_mna_scales_linearly():
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    base = mna(filt)
    for c in (2, 3):
        assert mna(filt.scaled(c)) == c * base


def test_zero_rank_graded_piece_refinement():
    # refine the calibration two-step: split off x^3, x^2 y, y^3 first, then
    # the rest of H0(O(3)); the middle graded piece has rank zero
    space = section_space((1, -1), 2)
    n = space.dimension

    def unit(i):
        return tuple(Fraction(int(j == i)) for j in range(n))

    v1 = (unit(0), unit(1), unit(3))
    v2 = (unit(2),)
    v3 = (unit(4), unit(5))
    filt = WeightedFiltration(
        space, (Fraction(1, 2), Fraction(0), Fraction(-1, 2)), (v1, v2, v3)
    )
    inv = filtration_invariants(filt)
    assert [(s.graded_rank, s.graded_degree) for s in inv.steps] == [
        (1, 1),
        (0, 0),
        (1, -1),
    ]
    assert mna(filt) == mna_weighted(filt) == -2

    coarse = WeightedFiltration(
        space, (Fraction(1, 2), Fraction(-1, 2)), (v1 + v2, v3)
    )
    nonzero = [
        (s.graded_rank, s.graded_degree)
        for s in filtration_invariants(coarse).steps
        if s.graded_rank > 0
    ]
    assert nonzero == [
        (s.graded_rank, s.graded_degree) for s in inv.steps if s.graded_rank > 0
    ]


def test_mna_report_fields():
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    rep = mna_report(filt)
    assert rep["mna"] == "-2"
    assert rep["j"] == 3
    assert rep["identity_holds"] is True
    assert rep["steps"] == [
        {"q": -2, "rank": 1, "degree": 1},
        {"q": 1, "rank": 2, "degree": 0},
    ]
    # second convention: weights rescaled to operator norm one
    assert rep["mna_opnorm_normalized"] == "-3"
