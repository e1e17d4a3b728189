"""Tests for the category tree."""
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dhc_classifier.engine import random_tree
from dhc_classifier.hierarchy import (
    ROOT,
    balanced_tree,
    class_index,
    indices_to_path,
    is_child,
    is_consistent,
    leaf_to_path,
    load_taxonomy,
    path_indices,
    read_taxonomy,
    serialize_taxonomy,
)
from dhc_classifier.nncore import Rng
from dhc_classifier.utils.errors import TaxonomyError


def test_minimal_tree():
    tree = load_taxonomy("a\tROOT\na1\ta\n")
    assert tree.depth == 2
    assert tree.nodes(1) == ("a",)
    assert tree.nodes(2) == ("a1",)


def test_cifar_shaped_tree():
    lines = [f"c{i}\tROOT" for i in range(20)]
    lines += [f"c{i}_{j}\tc{i}" for i in range(20) for j in range(5)]
    tree = load_taxonomy("\n".join(lines))
    assert tree.layer_sizes() == [20, 100]


def test_file_order_fixes_class_indices():
    tree = load_taxonomy("# comment\nb\tROOT\na\tROOT\nc\tROOT\nb1\tb\na1\ta\nc1\tc\n")
    assert tree.nodes(1) == ("b", "a", "c")
    assert class_index(tree, 1, "a") == 1
    assert class_index(tree, 2, "b1") == 0


def test_forward_references_load():
    tree = load_taxonomy("a1\ta\na\tROOT\n")
    assert leaf_to_path(tree, "a1") == ("a", "a1")


def test_display_names():
    tree = load_taxonomy("a\tROOT\tAppliances\na1\ta\tFridges\n")
    assert tree.name("a") == "Appliances"
    assert tree.name_map["a1"] == "Fridges"


@pytest.mark.parametrize("source, message", [
    ("a\tROOT\nx\ta\ny\tx\nz\tx\nw\ta\n", "not in previous layer"),
    ("a\tROOT\na\tROOT\n", "duplicate"),
    ("a\tROOT\na1\tzz\n", "unknown"),
    ("a\tb\nb\ta\n", "cycle"),
    ("a\tROOT\nx\ty\ny\tx\n", "cycle"),
    ("a ROOT\n", "malformed"),
    ("\n# only comments\n", "no layers"),
])
def test_invalid_taxonomies(source, message):
    with pytest.raises(TaxonomyError, match=message):
        load_taxonomy(source)


def test_ragged_layers_report_previous_layer():
    # b is a leaf at layer 1 while a's subtree reaches layer 2
    with pytest.raises(TaxonomyError, match="parent a not in previous layer"):
        load_taxonomy("a\tROOT\nb\tROOT\na1\ta\n")


def test_leaf_to_path():
    single = load_taxonomy("a\tROOT\n")
    assert leaf_to_path(single, "a") == ("a",)
    tree = load_taxonomy("a\tROOT\na1\ta\n")
    assert leaf_to_path(tree, "a1") == ("a", "a1")
    with pytest.raises(TaxonomyError):
        leaf_to_path(tree, "a")
    with pytest.raises(TaxonomyError):
        leaf_to_path(tree, "missing")


def test_class_index():
    tree = load_taxonomy("a\tROOT\nb\tROOT\nc\tROOT\n")
    assert class_index(tree, 1, "b") == 1
    assert class_index(tree, 1, "a") == 0
    with pytest.raises(TaxonomyError):
        class_index(tree, 2, "a")


def test_is_child(pair_tree):
    assert is_child(pair_tree, "a", "a1")
    assert not is_child(pair_tree, "a", "b1")
    with pytest.raises(TaxonomyError):
        is_child(pair_tree, "a", "zz")


def test_index_paths(two_branch_tree):
    assert path_indices(two_branch_tree, ("b", "b1")) == [1, 2]
    assert indices_to_path(two_branch_tree, [0, 1]) == ("a", "a2")
    assert is_consistent(two_branch_tree, [0, 1])
    assert not is_consistent(two_branch_tree, [0, 2])
    assert list(two_branch_tree.parent_index(2)) == [0, 0, 1]
    assert list(two_branch_tree.children_indices(1, 0)) == [0, 1]


def test_balanced_tree():
    tree = balanced_tree([3, 2, 2])
    assert tree.layer_sizes() == [3, 6, 12]
    assert leaf_to_path(tree, "c2_1_0") == ("c2", "c2_1", "c2_1_0")
    with pytest.raises(TaxonomyError):
        balanced_tree([2, 0])


def test_read_taxonomy(tmp_path):
    path = tmp_path / "tax.tsv"
    path.write_text("a\tROOT\na1\ta\n", encoding="utf-8")
    assert read_taxonomy(path).depth == 2
    with pytest.raises(TaxonomyError, match="Failed to read"):
        read_taxonomy(tmp_path / "missing.tsv")


def _all_paths(tree):
    layers = [tree.nodes(l) for l in range(1, tree.depth + 1)]
    for combo in itertools.product(*layers):
        if all(tree.parent(combo[i]) == combo[i - 1] for i in range(1, len(combo))) \
                and tree.parent(combo[0]) == ROOT:
            yield combo


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_tree_properties(seed):
    tree = random_tree(Rng(seed))
    children = tree.children_map
    for layer in range(1, tree.depth + 1):
        for node in tree.nodes(layer):
            assert node in children[tree.parent(node)]
            assert tree.nodes(layer)[class_index(tree, layer, node)] == node
        if layer > 1:
            assert sum(len(children[p]) for p in tree.nodes(layer - 1)) == len(tree.nodes(layer))

    paths = {path[-1]: path for path in _all_paths(tree)}
    for leaf in tree.leaves:
        assert leaf_to_path(tree, leaf) == paths[leaf]
        assert leaf_to_path(tree, leaf)[-1] == leaf

    reloaded = load_taxonomy(serialize_taxonomy(tree))
    assert reloaded == tree
    assert reloaded.fingerprint() == tree.fingerprint()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_is_child_matches_children_map(seed):
    rng = Rng(seed)
    tree = random_tree(rng)
    children = tree.children_map
    for _ in range(30):
        layer = int(rng.integers(2, tree.depth + 1))
        parent = tree.nodes(layer - 1)[int(rng.integers(0, len(tree.nodes(layer - 1))))]
        child = tree.nodes(layer)[int(rng.integers(0, len(tree.nodes(layer))))]
        assert is_child(tree, parent, child) == (child in children[parent])
