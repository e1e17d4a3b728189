"""Shared fixtures for the DHC test suite."""
from pathlib import Path

import numpy as np
import pytest

from dhc_classifier.data import HashingFeaturizer, load_dataset
from dhc_classifier.hierarchy import balanced_tree, load_taxonomy
from dhc_classifier.model import build_model
from dhc_classifier.models.config import ModelConfig, ShareMode
from dhc_classifier.nncore import Rng


@pytest.fixture
def two_branch_tree():
    """a -> (a1, a2), b -> (b1)."""
    return load_taxonomy("a\tROOT\nb\tROOT\na1\ta\na2\ta\nb1\tb\n")


@pytest.fixture
def pair_tree():
    """a -> a1, b -> b1."""
    return load_taxonomy("a\tROOT\nb\tROOT\na1\ta\nb1\tb\n")


@pytest.fixture
def deep_tree():
    return balanced_tree([2, 3, 2])


def small_config(input_dim=6, share_mode=ShareMode.HIERARCHICAL, **overrides):
    values = dict(
        input_dim=input_dim,
        base_hidden_dims=[5],
        root_dim=4,
        layer_dims=[3],
        share_mode=share_mode,
    )
    values.update(overrides)
    return ModelConfig(**values)


@pytest.fixture
def small_model(deep_tree):
    return build_model(deep_tree, small_config(), Rng(3))


@pytest.fixture
def random_inputs():
    return Rng(99).normal((5, 6))


TINY_TEXTS = {
    "a1": "apple apricot avocado alpha",
    "a2": "apple almond anise alpha",
    "b1": "banana berry blueberry beta",
}


@pytest.fixture
def tiny_dataset_text():
    lines = []
    for repeat in range(4):
        for leaf, text in TINY_TEXTS.items():
            lines.append(f"{leaf}\t{text} r{repeat}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def tiny_dataset(two_branch_tree, tiny_dataset_text):
    return load_dataset(tiny_dataset_text, two_branch_tree, HashingFeaturizer(64, 1))


@pytest.fixture
def tiny_workspace(tmp_path: Path, two_branch_tree, tiny_dataset_text):
    """Taxonomy, data and a small config file on disk."""
    (tmp_path / "taxonomy.tsv").write_text(
        "a\tROOT\tFruit A\nb\tROOT\tFruit B\na1\ta\na2\ta\nb1\tb\n", encoding="utf-8"
    )
    (tmp_path / "train.tsv").write_text(tiny_dataset_text, encoding="utf-8")
    (tmp_path / "test.tsv").write_text(tiny_dataset_text, encoding="utf-8")
    (tmp_path / "dhc.conf").write_text(
        "# tiny run\n"
        "taxonomy = taxonomy.tsv\n"
        "train_data = train.tsv\n"
        "test_data = test.tsv\n"
        "checkpoint = model.ckpt\n"
        "input_dim = 64\n"
        "ngram_order = 1\n"
        "base_hidden_dims = 16\n"
        "root_dim = 8\n"
        "layer_dims = 4\n"
        "epochs = 3\n"
        "batch_size = 4\n"
        "lr = 0.01\n"
        "progress = false\n"
        "workers = 2\n",
        encoding="utf-8",
    )
    return tmp_path


def assert_bitwise_equal(a: np.ndarray, b: np.ndarray) -> None:
    assert a.shape == b.shape
    assert a.tobytes() == b.tobytes()
