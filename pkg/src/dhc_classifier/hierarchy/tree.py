"""Category tree definition, loading and queries."""
import hashlib
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import TaxonomyError
from ..utils.logging import setup_logging

logger = setup_logging(__name__)

ROOT = "ROOT"

LabelPath = Tuple[str, ...]


class CategoryTree:
    """Layered taxonomy with an implicit synthetic root.

    Layers are numbered 1..depth; the order of ``nodes_per_layer[l - 1]`` fixes
    the class index of every node in layer ``l``. Instances are immutable after
    construction and safe to share between threads.
    """

    def __init__(
        self,
        nodes_per_layer: Sequence[Sequence[str]],
        parent_map: Dict[str, str],
        name_map: Optional[Dict[str, str]] = None,
    ):
        """Build and validate a tree.

        Args:
            nodes_per_layer: Node ids per layer, layer 1 first
            parent_map: Node to parent id (``ROOT`` for layer-1 nodes)
            name_map: Node to display label (defaults to the node id)
        """
        self._layers: Tuple[Tuple[str, ...], ...] = tuple(tuple(layer) for layer in nodes_per_layer)
        self._parent = dict(parent_map)
        self._names = {node: node for layer in self._layers for node in layer}
        self._names.update(name_map or {})
        self._layer_of: Dict[str, int] = {}
        self._index: Dict[str, int] = {}
        self._children: Dict[str, List[str]] = {ROOT: []}
        self._validate_and_index()

    def _validate_and_index(self) -> None:
        if not self._layers:
            raise TaxonomyError("Taxonomy has no layers")
        for layer_no, layer in enumerate(self._layers, start=1):
            if not layer:
                raise TaxonomyError(f"Layer {layer_no} is empty")
            for index, node in enumerate(layer):
                if node == ROOT or node in self._layer_of:
                    raise TaxonomyError(f"Duplicate node id: {node}")
                self._layer_of[node] = layer_no
                self._index[node] = index
                self._children[node] = []

        for node, layer_no in self._layer_of.items():
            if node not in self._parent:
                raise TaxonomyError(f"Node {node} has no parent")
            parent = self._parent[node]
            expected = 0 if parent == ROOT else self._layer_of.get(parent)
            if expected is None:
                raise TaxonomyError(f"Node {node} references unknown parent {parent}")
            if expected != layer_no - 1:
                raise TaxonomyError(f"Node {node}: parent {parent} not in previous layer")

        # children follow layer order, which is file order
        for layer in self._layers:
            for node in layer:
                self._children[self._parent[node]].append(node)

        for layer_no, layer in enumerate(self._layers[:-1], start=1):
            for node in layer:
                if not self._children[node]:
                    raise TaxonomyError(f"Node {node} in layer {layer_no} has no children")

        self._parent_index = [np.full(len(self._layers[0]), -1, dtype=np.int64)]
        for layer_no in range(2, len(self._layers) + 1):
            self._parent_index.append(np.array(
                [self._index[self._parent[node]] for node in self._layers[layer_no - 1]],
                dtype=np.int64,
            ))
        self._child_index = [
            [np.array([self._index[c] for c in self._children[node]], dtype=np.int64)
             for node in layer]
            for layer in self._layers[:-1]
        ]

    @property
    def depth(self) -> int:
        """Number of layers L (root excluded)."""
        return len(self._layers)

    @property
    def nodes_per_layer(self) -> Tuple[Tuple[str, ...], ...]:
        return self._layers

    @property
    def parent_map(self) -> Dict[str, str]:
        return dict(self._parent)

    @property
    def children_map(self) -> Dict[str, List[str]]:
        return {node: list(children) for node, children in self._children.items()}

    @property
    def name_map(self) -> Dict[str, str]:
        return dict(self._names)

    @property
    def leaves(self) -> Tuple[str, ...]:
        return self._layers[-1]

    def layer_sizes(self) -> List[int]:
        """Class counts |1|..|L|."""
        return [len(layer) for layer in self._layers]

    def nodes(self, layer: int) -> Tuple[str, ...]:
        self._check_layer(layer)
        return self._layers[layer - 1]

    def node_at(self, layer: int, index: int) -> str:
        """Node id for a class index."""
        nodes = self.nodes(layer)
        if not 0 <= index < len(nodes):
            raise TaxonomyError(f"Class index {index} out of range for layer {layer}")
        return nodes[index]

    def layer_of(self, node: str) -> int:
        if node not in self._layer_of:
            raise TaxonomyError(f"Unknown node: {node}")
        return self._layer_of[node]

    def parent(self, node: str) -> str:
        self.layer_of(node)
        return self._parent[node]

    def children(self, node: str) -> List[str]:
        if node != ROOT:
            self.layer_of(node)
        return list(self._children[node])

    def name(self, node: str) -> str:
        self.layer_of(node)
        return self._names[node]

    def parent_index(self, layer: int) -> np.ndarray:
        """Parent class index (in layer - 1) of every class in ``layer``; -1 for layer 1."""
        self._check_layer(layer)
        return self._parent_index[layer - 1]

    def children_indices(self, layer: int, index: int) -> np.ndarray:
        """Class indices in ``layer + 1`` of the children of class ``index`` in ``layer``."""
        if not 1 <= layer < self.depth:
            raise TaxonomyError(f"Layer {layer} has no child layer")
        return self._child_index[layer - 1][index]

    def fingerprint(self) -> str:
        """SHA-256 of the serialized taxonomy."""
        return hashlib.sha256(serialize_taxonomy(self).encode("utf-8")).hexdigest()

    def _check_layer(self, layer: int) -> None:
        if not 1 <= layer <= self.depth:
            raise TaxonomyError(f"Layer {layer} outside 1..{self.depth}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CategoryTree):
            return NotImplemented
        return (
            self._layers == other._layers
            and self._parent == other._parent
            and self._names == other._names
        )

    def __repr__(self) -> str:
        return f"CategoryTree(depth={self.depth}, sizes={self.layer_sizes()})"


def load_taxonomy(source: str) -> CategoryTree:
    """Parse taxonomy file content.

    Each non-comment line is ``node_id<TAB>parent_id[<TAB>display_name]``; layer-1
    nodes name ``ROOT`` as parent. A node's layer is its parent's layer + 1.

    Args:
        source: Taxonomy file content

    Returns:
        CategoryTree: Validated tree
    """
    parent_map: Dict[str, str] = {}
    name_map: Dict[str, str] = {}
    line_of: Dict[str, int] = {}

    for lineno, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = raw.rstrip("\r").split("\t")
        if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
            raise TaxonomyError(f"Line {lineno}: malformed line {raw!r}")
        node, parent = fields[0], fields[1]
        if node == ROOT or node in parent_map:
            raise TaxonomyError(f"Line {lineno}: duplicate node id {node}")
        parent_map[node] = parent
        line_of[node] = lineno
        if len(fields) == 3 and fields[2]:
            name_map[node] = fields[2]

    for node, parent in parent_map.items():
        if parent != ROOT and parent not in parent_map:
            raise TaxonomyError(
                f"Line {line_of[node]}: parent {parent} of {node} references unknown node"
            )

    layer_of: Dict[str, int] = {ROOT: 0}
    for node in parent_map:
        chain = []
        current = node
        while current not in layer_of:
            if current in chain:
                raise TaxonomyError(f"Line {line_of[node]}: cycle through node {current}")
            chain.append(current)
            current = parent_map[current]
        for offset, member in enumerate(reversed(chain), start=1):
            layer_of[member] = layer_of[current] + offset

    # every leaf must sit in the last layer; a node hanging below a shallower
    # leaf layer names a parent from its own layer
    has_child = {parent for parent in parent_map.values()}
    leaf_layers = [layer_of[n] for n in parent_map if n not in has_child]
    if leaf_layers:
        leaf_layer = min(leaf_layers)
        for node in parent_map:
            if layer_of[node] > leaf_layer:
                raise TaxonomyError(
                    f"Line {line_of[node]}: node {node}: parent {parent_map[node]} "
                    f"not in previous layer (leaf layer is {leaf_layer})"
                )

    depth = max(layer_of.values())
    layers: List[List[str]] = [[] for _ in range(depth)]
    for node in parent_map:
        layers[layer_of[node] - 1].append(node)

    tree = CategoryTree(layers, parent_map, name_map)
    logger.info(f"Loaded taxonomy with {tree.depth} layers, sizes {tree.layer_sizes()}")
    return tree


def read_taxonomy(path: Union[str, Path]) -> CategoryTree:
    """Load a taxonomy file from disk."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise TaxonomyError(f"Failed to read taxonomy {path}: {str(e)}")
    return load_taxonomy(text)


def serialize_taxonomy(tree: CategoryTree) -> str:
    """Render a tree in the taxonomy file format, layer by layer."""
    lines = []
    names = tree.name_map
    parents = tree.parent_map
    for layer in tree.nodes_per_layer:
        for node in layer:
            fields = [node, parents[node]]
            if names[node] != node:
                fields.append(names[node])
            lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def leaf_to_path(tree: CategoryTree, leaf: str) -> LabelPath:
    """Root-to-leaf label path ending at ``leaf``."""
    if tree.layer_of(leaf) != tree.depth:
        raise TaxonomyError(f"Node {leaf} is not in the leaf layer {tree.depth}")
    path = [leaf]
    node = leaf
    for _ in range(tree.depth - 1):
        node = tree.parent(node)
        path.append(node)
    return tuple(reversed(path))


def class_index(tree: CategoryTree, layer: int, node: str) -> int:
    """0-based position of ``node`` within its layer."""
    if tree.layer_of(node) != layer:
        raise TaxonomyError(f"Node {node} is not in layer {layer}")
    return tree._index[node]


def is_child(tree: CategoryTree, parent: str, child: str) -> bool:
    """True iff ``parent`` is the parent of ``child``."""
    tree.layer_of(parent)
    return tree.parent(child) == parent


def path_indices(tree: CategoryTree, path: Sequence[str]) -> List[int]:
    """Class index per layer for a label path."""
    return [class_index(tree, layer, node) for layer, node in enumerate(path, start=1)]


def indices_to_path(tree: CategoryTree, indices: Sequence[int]) -> LabelPath:
    """Label path for per-layer class indices."""
    return tuple(tree.node_at(layer, int(i)) for layer, i in enumerate(indices, start=1))


def is_consistent(tree: CategoryTree, indices: Sequence[int]) -> bool:
    """True iff per-layer class indices form a parent-child chain."""
    for layer in range(2, len(indices) + 1):
        if tree.parent_index(layer)[indices[layer - 1]] != indices[layer - 2]:
            return False
    return True


def balanced_tree(branching: Sequence[int], prefix: str = "c") -> CategoryTree:
    """Full tree with the given branching factor per layer.

    Args:
        branching: Children per node for each layer, layer 1 first
        prefix: Node id prefix

    Returns:
        CategoryTree: Tree with node ids like ``c0``, ``c0_1``, ``c0_1_2``
    """
    if not branching or any(b < 1 for b in branching):
        raise TaxonomyError(f"Invalid branching factors: {list(branching)}")
    layers: List[List[str]] = [[f"{prefix}{i}" for i in range(branching[0])]]
    parent_map = {node: ROOT for node in layers[0]}
    for factor in branching[1:]:
        layer = []
        for parent in layers[-1]:
            for j in range(factor):
                node = f"{parent}_{j}"
                layer.append(node)
                parent_map[node] = parent
        layers.append(layer)
    return CategoryTree(layers, parent_map)
