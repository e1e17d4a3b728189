"""Labeled datasets: loading, serialization and deterministic splitting."""
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from ..hierarchy import CategoryTree, LabelPath, leaf_to_path, path_indices
from ..nncore import Rng
from ..utils.errors import DataError, TaxonomyError
from ..utils.logging import setup_logging

logger = setup_logging(__name__)

Featurizer = Callable[[str], np.ndarray]


class LabeledExample:
    """One document: its feature row, gold path and source text."""

    def __init__(self, features: np.ndarray, gold: LabelPath, text: str = ""):
        self.features = features
        self.gold = gold
        self.text = text

    @property
    def leaf(self) -> str:
        return self.gold[-1]


class LabeledDataset:
    """Ordered examples sharing one feature width and one category tree."""

    def __init__(self, examples: Sequence[LabeledExample], input_dim: int, tree: CategoryTree):
        self.examples = list(examples)
        self.input_dim = input_dim
        self.tree = tree
        for i, example in enumerate(self.examples):
            if example.features.shape != (input_dim,):
                raise DataError(f"Example {i} has feature shape {example.features.shape}")
            if len(example.gold) != tree.depth or tree.layer_of(example.leaf) != tree.depth:
                raise DataError(f"Example {i} gold path {example.gold} does not end at a leaf")

    def __len__(self) -> int:
        return len(self.examples)

    def __getitem__(self, index: int) -> LabeledExample:
        return self.examples[index]

    def features(self) -> np.ndarray:
        """Feature matrix [N x input_dim]."""
        if not self.examples:
            return np.zeros((0, self.input_dim))
        return np.vstack([e.features for e in self.examples])

    def gold_indices(self) -> np.ndarray:
        """Gold class indices [N x L]."""
        return np.array(
            [path_indices(self.tree, e.gold) for e in self.examples],
            dtype=np.int64,
        ).reshape(len(self.examples), self.tree.depth)

    def texts(self) -> List[str]:
        return [e.text for e in self.examples]

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        return LabeledDataset([self.examples[i] for i in indices], self.input_dim, self.tree)


def load_dataset(content: str, tree: CategoryTree, featurizer: Featurizer) -> LabeledDataset:
    """Parse ``leaf_id<TAB>document text`` lines.

    Args:
        content: Dataset file content
        tree: Category tree the leaves belong to
        featurizer: Callable turning a document into a feature row

    Returns:
        LabeledDataset: Examples in line order
    """
    examples = []
    for lineno, raw in enumerate(content.splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        leaf, sep, text = raw.rstrip("\r").partition("\t")
        if not sep or not leaf:
            raise DataError(f"Line {lineno}: malformed line, expected 'leaf_id<TAB>text'")
        try:
            gold = leaf_to_path(tree, leaf)
        except TaxonomyError as e:
            raise DataError(f"Line {lineno}: unknown leaf id {leaf!r} ({str(e)})")
        examples.append(LabeledExample(np.asarray(featurizer(text), dtype=np.float64), gold, text))

    input_dim = examples[0].features.shape[0] if examples else getattr(featurizer, "input_dim", 0)
    dataset = LabeledDataset(examples, input_dim, tree)
    logger.info(f"Loaded {len(dataset)} examples with input_dim {input_dim}")
    return dataset


def read_dataset(path: Union[str, Path], tree: CategoryTree, featurizer: Featurizer) -> LabeledDataset:
    """Load a dataset file from disk."""
    try:
        content = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(f"Failed to read dataset {path}: {str(e)}")
    return load_dataset(content, tree, featurizer)


def serialize_dataset(dataset: LabeledDataset) -> str:
    """Render examples in the dataset file format."""
    return "".join(f"{e.leaf}\t{e.text}\n" for e in dataset.examples)


def split_indices(count: int, test_fraction: float = 0.1, seed: int = 0) -> Tuple[List[int], List[int]]:
    """Seeded shuffle of ``range(count)``; the first ``round(count * test_fraction)`` go to test.

    Both index lists come back sorted, so each part keeps the original order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if count == 0:
        raise DataError("Cannot split an empty dataset")
    order = Rng(seed).permutation(count)
    n_test = int(round(count * test_fraction))
    return sorted(order[n_test:].tolist()), sorted(order[:n_test].tolist())


def split(
    dataset: LabeledDataset, test_fraction: float = 0.1, seed: int = 0
) -> Tuple[LabeledDataset, LabeledDataset]:
    """Deterministic train/test partition.

    Returns:
        (train, test)
    """
    train_idx, test_idx = split_indices(len(dataset), test_fraction, seed)
    return dataset.subset(train_idx), dataset.subset(test_idx)
