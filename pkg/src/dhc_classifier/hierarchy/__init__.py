from .tree import (
    ROOT,
    CategoryTree,
    LabelPath,
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

__all__ = [
    'ROOT',
    'CategoryTree',
    'LabelPath',
    'balanced_tree',
    'class_index',
    'indices_to_path',
    'is_child',
    'is_consistent',
    'leaf_to_path',
    'load_taxonomy',
    'path_indices',
    'read_taxonomy',
    'serialize_taxonomy',
]
