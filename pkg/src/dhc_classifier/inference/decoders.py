"""Decode per-layer distributions into consistent root-to-leaf paths.

Scores are sums of per-layer log probabilities, each probability floored at
1e-30. Decoders only need the tree, so they work with any model variant.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..hierarchy import CategoryTree, class_index, leaf_to_path
from ..models.config import DecoderType
from ..models.reports import DecodedPath
from ..utils.errors import ConfigurationError, DataError, ShapeError

LOG_FLOOR = 1e-30


def _log(p: float) -> float:
    return float(np.log(max(p, LOG_FLOOR)))


def _check(dists: Sequence[np.ndarray], tree: CategoryTree) -> List[np.ndarray]:
    if len(dists) != tree.depth:
        raise ShapeError(f"Expected {tree.depth} distributions, got {len(dists)}")
    rows = []
    for layer, (dist, size) in enumerate(zip(dists, tree.layer_sizes()), start=1):
        row = np.asarray(dist, dtype=np.float64).reshape(-1)
        if row.size != size:
            raise ShapeError(f"Layer {layer} distribution has {row.size} entries, expected {size}")
        rows.append(row)
    return rows


def _make_path(tree: CategoryTree, rows: Sequence[np.ndarray], indices: Sequence[int]) -> DecodedPath:
    probs = tuple(float(rows[l][i]) for l, i in enumerate(indices))
    return DecodedPath(
        path=tuple(tree.node_at(l, i) for l, i in enumerate(indices, start=1)),
        indices=tuple(int(i) for i in indices),
        probabilities=probs,
        score=sum(_log(p) for p in probs),
    )


def greedy_decode(dists: Sequence[np.ndarray], tree: CategoryTree) -> DecodedPath:
    """Top-down argmax, each layer restricted to children of the previous choice."""
    rows = _check(dists, tree)
    indices = [int(np.argmax(rows[0]))]
    for layer in range(2, tree.depth + 1):
        children = tree.children_indices(layer - 1, indices[-1])
        if children.size == 0:
            raise DataError(f"Node {tree.node_at(layer - 1, indices[-1])} has no children")
        # children are in ascending class order, so argmax ties go to the lowest index
        indices.append(int(children[np.argmax(rows[layer - 1][children])]))
    return _make_path(tree, rows, indices)


def heuristic_decode(dists: Sequence[np.ndarray], tree: CategoryTree) -> DecodedPath:
    """Unrestricted leaf argmax; ancestors read from the tree."""
    rows = _check(dists, tree)
    leaf = tree.node_at(tree.depth, int(np.argmax(rows[-1])))
    path = leaf_to_path(tree, leaf)
    indices = [class_index(tree, layer, node) for layer, node in enumerate(path, start=1)]
    return _make_path(tree, rows, indices)


def beam_decode(dists: Sequence[np.ndarray], tree: CategoryTree, k: int) -> List[DecodedPath]:
    """Beam search over layers keeping the ``k`` best partial paths.

    Returns:
        List[DecodedPath]: Final beam, best joint score first; ties ordered by
        class indices lexicographically
    """
    if k < 1:
        raise ConfigurationError(f"Beam width must be >= 1, got {k}")
    rows = _check(dists, tree)
    logs = [np.log(np.maximum(row, LOG_FLOOR)) for row in rows]

    def prune(candidates: List[Tuple[float, Tuple[int, ...]]]) -> List[Tuple[float, Tuple[int, ...]]]:
        return sorted(candidates, key=lambda c: (-c[0], c[1]))[:k]

    beam = prune([(float(logs[0][i]), (i,)) for i in range(rows[0].size)])
    for layer in range(2, tree.depth + 1):
        candidates = []
        for score, indices in beam:
            for child in tree.children_indices(layer - 1, indices[-1]):
                child = int(child)
                candidates.append((score + float(logs[layer - 1][child]), indices + (child,)))
        beam = prune(candidates)
    return [_make_path(tree, rows, indices) for _, indices in beam]


def decode(
    dists: Sequence[np.ndarray],
    tree: CategoryTree,
    decoder: DecoderType = DecoderType.GREEDY,
    beam_width: int = 3,
) -> DecodedPath:
    """Best path under the chosen decoder."""
    decoder = DecoderType(decoder)
    if decoder == DecoderType.GREEDY:
        return greedy_decode(dists, tree)
    if decoder == DecoderType.HEURISTIC:
        return heuristic_decode(dists, tree)
    return beam_decode(dists, tree, beam_width)[0]


def decode_batch(
    dists: Sequence[np.ndarray],
    tree: CategoryTree,
    decoder: DecoderType = DecoderType.GREEDY,
    beam_width: int = 3,
    start: int = 0,
    stop: Optional[int] = None,
) -> List[DecodedPath]:
    """Decode rows ``start:stop`` of per-layer distribution matrices."""
    stop = dists[0].shape[0] if stop is None else stop
    return [
        decode([d[i] for d in dists], tree, decoder, beam_width)
        for i in range(start, stop)
    ]
