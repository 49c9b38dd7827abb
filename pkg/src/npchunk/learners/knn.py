"""Memory-based learning: weighted-overlap k-nearest-neighbor classification.

The classifier stores every training instance and labels a new item by
the most frequent class among the stored items closest to it.  Distance
is the sum of per-feature weights over mismatching positions, with the
weights taken from each feature's information gain on the training set
(gain ratio or unweighted overlap by configuration).  ``k`` counts
nearest *distinct distances*, not nearest instances: all instances at
the k smallest occurring distances vote.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from .base import TaggingChunker
from .features import ContextSpec
from .infogain import gain_ratio, information_gain


def class_preference(y: Sequence) -> list:
    """Classes ordered for tie-breaking: training frequency, then name."""
    counts = Counter(y)
    return sorted(counts, key=lambda c: (-counts[c], str(c)))


class KnnClassifier:
    """Weighted-overlap k-NN over categorical feature tuples."""

    def __init__(self, k: int = 3, weighting: str = "ig"):
        if k < 1:
            raise ValueError(f"k must be >= 1: {k}")
        if weighting not in ("ig", "gain-ratio", "none"):
            raise ValueError(f"unknown weighting {weighting!r}")
        self.k = k
        self.weighting = weighting

    def fit(self, X: Sequence, y: Sequence):
        if not X:
            raise ValueError("cannot fit on an empty instance set")
        arity = len(X[0])
        if any(len(x) != arity for x in X):
            raise ValueError("instances must share one arity")

        self.classes_ = class_preference(y)
        class_index = {c: i for i, c in enumerate(self.classes_)}

        if self.weighting == "none":
            self.weights_ = np.ones(arity)
        else:
            score = information_gain if self.weighting == "ig" else gain_ratio
            columns = list(zip(*X))
            self.weights_ = np.array([score(col, y) for col in columns])

        # Deduplicate rows; each unique row keeps a per-class vote count.
        self.encoders_ = [{} for _ in range(arity)]
        row_index = {}
        rows = []
        counts = []
        for x, cls in zip(X, y):
            coded = tuple(
                self.encoders_[f].setdefault(v, len(self.encoders_[f]))
                for f, v in enumerate(x)
            )
            at = row_index.get(coded)
            if at is None:
                at = row_index[coded] = len(rows)
                rows.append(coded)
                counts.append([0] * len(self.classes_))
            counts[at][class_index[cls]] += 1
        self.rows_ = np.array(rows, dtype=np.int32)
        self.counts_ = np.array(counts, dtype=np.int64)
        self.n_stored_ = len(X)
        return self

    def _encode(self, x) -> np.ndarray:
        # Unseen values get -1, which mismatches every stored code.
        return np.array(
            [self.encoders_[f].get(v, -1) for f, v in enumerate(x)], dtype=np.int32
        )

    def _votes(self, x) -> np.ndarray:
        distances = (self.rows_ != self._encode(x)) @ self.weights_
        nearest = np.unique(distances)[: self.k]
        within = distances <= nearest[-1]
        return self.counts_[within].sum(axis=0)

    def predict(self, x):
        # argmax takes the first maximum, and classes_ is already in
        # tie-break preference order.
        return self.classes_[int(np.argmax(self._votes(x)))]

    def predict_many(self, X: Sequence) -> list:
        return [self.predict(x) for x in X]


class KnnChunker(TaggingChunker):
    """Chunker backed by the memory-based k-NN classifier.

    Context of ``word_context`` words and ``pos_context`` POS tags on
    each side of the focus word, k = 3 by default.
    """

    def __init__(
        self,
        representation: str = "IOB1",
        k: int = 3,
        weighting: str = "ig",
        word_context: int = 4,
        pos_context: int = 4,
    ):
        self.representation = representation
        self.k = k
        self.weighting = weighting
        self.word_context = word_context
        self.pos_context = pos_context

    def _make_core(self):
        return KnnClassifier(k=self.k, weighting=self.weighting)

    def _spec(self) -> ContextSpec:
        return ContextSpec(
            word_left=self.word_context,
            word_right=self.word_context,
            pos_left=self.pos_context,
            pos_right=self.pos_context,
        )
