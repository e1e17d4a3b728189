"""Multinomial naive-Bayes leaf classifier used as a learnability reference."""
from typing import List, Sequence

import numpy as np
from sklearn.feature_extraction.text import CountVectorizer
from sklearn.naive_bayes import MultinomialNB

from ..utils.errors import DataError
from .dataset import LabeledDataset


class NaiveBayesOracle:
    """Bag-of-words naive Bayes over whitespace tokens with Laplace smoothing."""

    def __init__(self, smoothing: float = 1.0):
        self.smoothing = smoothing
        self._vectorizer = CountVectorizer(lowercase=True, token_pattern=r"\S+")
        self._model = MultinomialNB(alpha=smoothing)
        self._fitted = False

    def fit(self, texts: Sequence[str], leaves: Sequence[str]) -> "NaiveBayesOracle":
        if len(texts) != len(leaves) or not texts:
            raise DataError(f"Need matching non-empty texts and labels, got {len(texts)} / {len(leaves)}")
        counts = self._vectorizer.fit_transform(texts)
        self._model.fit(counts, list(leaves))
        self._fitted = True
        return self

    def fit_dataset(self, dataset: LabeledDataset) -> "NaiveBayesOracle":
        return self.fit(dataset.texts(), [e.leaf for e in dataset.examples])

    def predict(self, texts: Sequence[str]) -> List[str]:
        if not self._fitted:
            raise DataError("NaiveBayesOracle.predict called before fit")
        if not texts:
            return []
        return [str(leaf) for leaf in self._model.predict(self._vectorizer.transform(texts))]

    def leaf_accuracy(self, dataset: LabeledDataset) -> float:
        if len(dataset) == 0:
            raise DataError("Cannot score an empty dataset")
        predicted = np.array(self.predict(dataset.texts()))
        gold = np.array([e.leaf for e in dataset.examples])
        return float(np.mean(predicted == gold))
