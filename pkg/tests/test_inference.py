"""Tests for the path decoders."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dhc_classifier.engine import random_tree
from dhc_classifier.hierarchy import balanced_tree, is_consistent, leaf_to_path, load_taxonomy, path_indices
from dhc_classifier.inference import beam_decode, decode, decode_batch, greedy_decode, heuristic_decode
from dhc_classifier.models.config import DecoderType
from dhc_classifier.nncore import Rng, softmax_rows
from dhc_classifier.utils.errors import ConfigurationError, ShapeError


def _random_dists(rng, tree):
    return [softmax_rows(rng.normal((1, size), 2.0))[0] for size in tree.layer_sizes()]


def test_greedy_masks_children(two_branch_tree):
    result = greedy_decode([np.array([0.6, 0.4]), np.array([0.1, 0.2, 0.7])], two_branch_tree)
    assert result.path == ("a", "a2")
    assert result.indices == (0, 1)
    assert result.probabilities == (0.6, 0.2)
    assert result.score == pytest.approx(math.log(0.6) + math.log(0.2))


def test_heuristic_follows_the_leaf(pair_tree):
    result = heuristic_decode([np.array([0.8, 0.2]), np.array([0.4, 0.6])], pair_tree)
    assert result.path == ("b", "b1")
    assert result.probabilities == (0.2, 0.6)


def test_beam_prefers_joint_score(pair_tree):
    dists = [np.array([0.55, 0.45]), np.array([0.3, 0.7])]
    beam = beam_decode(dists, pair_tree, 2)
    assert [r.path for r in beam] == [("b", "b1"), ("a", "a1")]
    assert greedy_decode(dists, pair_tree).path == ("a", "a1")


def test_single_layer_decoders_agree():
    tree = load_taxonomy("x\tROOT\ny\tROOT\nz\tROOT\n")
    dists = [np.array([0.2, 0.5, 0.3])]
    for decoder in DecoderType:
        assert decode(dists, tree, decoder).path == ("y",)


def test_ties_go_to_lowest_index(two_branch_tree):
    result = greedy_decode([np.array([0.5, 0.5]), np.array([0.4, 0.4, 0.2])], two_branch_tree)
    assert result.indices == (0, 0)
    beam = beam_decode([np.array([0.5, 0.5]), np.array([0.5, 0.0, 0.5])], two_branch_tree, 3)
    assert beam[0].indices == (0, 0)
    assert beam[1].indices == (1, 2)


def test_floor_keeps_scores_finite(pair_tree):
    result = greedy_decode([np.array([1.0, 0.0]), np.array([0.0, 1.0])], pair_tree)
    assert result.path == ("a", "a1")
    assert result.score == pytest.approx(math.log(1e-30))


def test_decoder_argument_checks(pair_tree):
    dists = [np.array([0.5, 0.5]), np.array([0.5, 0.5])]
    with pytest.raises(ConfigurationError):
        beam_decode(dists, pair_tree, 0)
    with pytest.raises(ShapeError):
        greedy_decode(dists[:1], pair_tree)
    with pytest.raises(ShapeError):
        heuristic_decode([np.array([1.0]), np.array([0.5, 0.5])], pair_tree)


@settings(max_examples=1000, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_every_decoder_returns_a_consistent_path(seed):
    rng = Rng(seed)
    tree = random_tree(rng)
    dists = _random_dists(rng, tree)
    greedy = greedy_decode(dists, tree)
    heuristic = heuristic_decode(dists, tree)
    beam = beam_decode(dists, tree, 3)
    for result in [greedy, heuristic] + beam:
        assert is_consistent(tree, result.indices)
    assert greedy.indices[0] == int(np.argmax(dists[0]))
    assert heuristic.indices[-1] == int(np.argmax(dists[-1]))
    scores = [r.score for r in beam]
    assert scores == sorted(scores, reverse=True)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_wide_beam_matches_exhaustive_search(seed):
    rng = Rng(seed)
    tree = random_tree(rng, int(rng.integers(2, 5)), int(rng.integers(2, 51)))
    assert len(tree.leaves) <= 50
    dists = _random_dists(rng, tree)
    logs = [np.log(np.maximum(d, 1e-30)) for d in dists]
    best_score, best_path = -math.inf, None
    for leaf in tree.leaves:
        path = leaf_to_path(tree, leaf)
        score = sum(float(logs[l][i]) for l, i in enumerate(path_indices(tree, path)))
        if score > best_score:
            best_score, best_path = score, path
    top = beam_decode(dists, tree, len(tree.leaves))[0]
    assert top.path == best_path
    assert top.score == pytest.approx(best_score)


def test_narrow_beam_equals_greedy_on_chain_tree():
    tree = balanced_tree([4, 1, 1])
    rng = Rng(8)
    for _ in range(50):
        dists = _random_dists(rng, tree)
        assert beam_decode(dists, tree, 1)[0].path == greedy_decode(dists, tree).path


def test_decode_batch_slices_rows(deep_tree):
    rng = Rng(9)
    dists = [softmax_rows(rng.normal((6, size))) for size in deep_tree.layer_sizes()]
    everything = decode_batch(dists, deep_tree, DecoderType.BEAM, 2)
    assert len(everything) == 6
    middle = decode_batch(dists, deep_tree, DecoderType.BEAM, 2, start=2, stop=4)
    assert middle == everything[2:4]
    assert everything[5] == decode([d[5] for d in dists], deep_tree, "beam", 2)
