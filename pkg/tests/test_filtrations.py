import json
from fractions import Fraction

import pytest

from p1stab.algebra import (
    SplitBundle,
    WeightedFiltration,
    filtration_from_json,
    filtration_to_json,
    load_corpus,
    section_space,
    trivial_filtration,
    two_step_filtration,
)
from p1stab.errors import ConfigError, EmptySubspace, TwistTooSmall


def test_two_step_weights_calibration():
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    assert filt.weights == (Fraction(2, 3), Fraction(-1, 3))
    assert filt.denominator_clearing == 3
    assert filt.dims == (4, 2)


def test_two_step_weights_trivial_pair():
    filt = two_step_filtration(SplitBundle((0, 0)), 1, [0])
    assert filt.weights == (Fraction(1, 2), Fraction(-1, 2))
    assert filt.denominator_clearing == 2
    assert filt.is_traceless


def test_two_step_full_selection_degenerates():
    filt = two_step_filtration(SplitBundle((0, 0)), 1, [0, 1])
    assert filt.is_trivial
    assert filt.weights == (Fraction(0),)
    assert filt.denominator_clearing == 1


def test_two_step_below_regularity():
    with pytest.raises(TwistTooSmall):
        two_step_filtration(SplitBundle((1, -1)), 0, [0])


def test_two_step_explicit_subspace_complement_is_l2_orthogonal():
    filt = two_step_filtration(SplitBundle((0, 0)), 1, [[1, 0, 0, 1]])
    gram = filt.space.l2_gram_exact()
    v1 = filt.subspaces[0][0]
    for w in filt.subspaces[1]:
        assert sum(a * g * b for a, g, b in zip(v1, gram, w)) == 0


def test_weight_ordering_enforced():
    space = section_space((0, 0), 1)
    eye = [[Fraction(int(i == j)) for i in range(4)] for j in range(4)]
    with pytest.raises(ValueError):
        WeightedFiltration(space, (Fraction(1), Fraction(1)), (eye[:2], eye[2:]))
    with pytest.raises(ValueError):
        WeightedFiltration(space, (Fraction(-1), Fraction(1)), (eye[:2], eye[2:]))


def test_subspaces_must_span():
    space = section_space((0, 0), 1)
    eye = [[Fraction(int(i == j)) for i in range(4)] for j in range(4)]
    with pytest.raises(ValueError):
        WeightedFiltration(space, (Fraction(1), Fraction(0)), (eye[:2], eye[1:3]))
    with pytest.raises(EmptySubspace):
        WeightedFiltration(space, (Fraction(1), Fraction(0)), (eye[:2], ()))


def test_trace_is_advisory_not_enforced():
    # the canonical two-step weights are not traceless for asymmetric splits
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    assert filt.weight_trace == 2
    assert not filt.is_traceless
    assert filt.max_weight_norm <= 1


def test_scaled_weights():
    filt = two_step_filtration(SplitBundle((0, 0)), 1, [0])
    doubled = filt.scaled(2)
    assert doubled.weights == (Fraction(1), Fraction(-1))
    assert doubled.denominator_clearing == 1


def test_corpus_roundtrip(tmp_path):
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    record = filtration_to_json(filt)
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps([record, record]))
    loaded = load_corpus(path)
    assert len(loaded) == 2
    assert loaded[0].weights == filt.weights
    assert loaded[0].subspaces == filt.subspaces


def test_corpus_validation_names_field(tmp_path):
    filt = trivial_filtration(section_space((0, 0), 1))
    record = filtration_to_json(filt)
    del record["weights"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(record))
    with pytest.raises(ConfigError, match="weights"):
        load_corpus(path)


def test_corpus_nondescending_weights_rejected(tmp_path):
    filt = two_step_filtration(SplitBundle((1, -1)), 2, [0])
    record = filtration_to_json(filt)
    record["weights"] = ["-1/3", "2/3"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(record))
    with pytest.raises(ConfigError, match="descending"):
        load_corpus(path)
