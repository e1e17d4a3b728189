"""Hashing-trick bag-of-n-grams featurizer."""
from functools import lru_cache
from typing import Iterable, List

import numpy as np

from ..models.config import FeaturizerConfig

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


@lru_cache(maxsize=1 << 16)
def _gram_hash(gram: str) -> int:
    return fnv1a_64(gram.encode("utf-8"))


def ngrams(tokens: List[str], n_max: int) -> Iterable[str]:
    """Every word n-gram with 1 <= n <= n_max, joined by single spaces."""
    for n in range(1, n_max + 1):
        for i in range(len(tokens) - n + 1):
            yield " ".join(tokens[i:i + n])


def hash_features(text: str, input_dim: int, n_max: int) -> np.ndarray:
    """Unit-norm hashed n-gram counts of a lowercased, whitespace-tokenized text.

    Args:
        text: Raw document
        input_dim: Number of hash buckets
        n_max: Largest n-gram order

    Returns:
        np.ndarray: Row of length ``input_dim``; all zeros for empty text
    """
    row = np.zeros(input_dim)
    tokens = text.lower().split()
    for gram in ngrams(tokens, n_max):
        row[_gram_hash(gram) % input_dim] += 1.0
    norm = np.linalg.norm(row)
    if norm > 0.0:
        row /= norm
    return row


class HashingFeaturizer:
    """Maps documents to dense hashed feature rows."""

    def __init__(self, input_dim: int = 4096, n_max: int = 2):
        self.input_dim = input_dim
        self.n_max = n_max

    @classmethod
    def from_config(cls, config: FeaturizerConfig) -> "HashingFeaturizer":
        return cls(config.input_dim, config.ngram_order)

    def __call__(self, text: str) -> np.ndarray:
        return hash_features(text, self.input_dim, self.n_max)

    def transform(self, texts: Iterable[str]) -> np.ndarray:
        """Feature matrix [len(texts) x input_dim]."""
        rows = [self(text) for text in texts]
        if not rows:
            return np.zeros((0, self.input_dim))
        return np.vstack(rows)
