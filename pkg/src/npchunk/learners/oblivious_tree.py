"""Oblivious decision tree with an information-gain feature order.

All paths test features in one global order, the features sorted by
descending information gain on the training set.  Every node stores the
majority class of the instances reaching it; lookup walks the order and
falls back to the last visited node's default whenever a feature value
was never seen there.  Expansion stops when a node is pure, so storage
stays close to what the training data actually distinguishes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .base import TaggingChunker
from .features import ContextSpec
from .infogain import gain_ratio, information_gain
from .knn import class_preference


@dataclass
class TreeNode:
    default: object
    children: dict = field(default_factory=dict)


class ObliviousTreeClassifier:
    """Decision tree whose levels all test the same feature."""

    def __init__(self, weighting: str = "ig"):
        if weighting not in ("ig", "gain-ratio"):
            raise ValueError(f"unknown weighting {weighting!r}")
        self.weighting = weighting

    def fit(self, X: Sequence, y: Sequence):
        if not X:
            raise ValueError("cannot fit on an empty instance set")
        arity = len(X[0])
        self.classes_ = class_preference(y)
        self._rank = {c: i for i, c in enumerate(self.classes_)}

        score = information_gain if self.weighting == "ig" else gain_ratio
        columns = list(zip(*X))
        gains = [score(col, y) for col in columns]
        self.feature_order_ = sorted(range(arity), key=lambda f: (-gains[f], f))

        self.root_ = self._grow(list(range(len(X))), 0, X, y)
        return self

    def _majority(self, indices, y):
        counts = Counter(y[i] for i in indices)
        return max(counts.items(), key=lambda kv: (kv[1], -self._rank[kv[0]]))[0]

    def _grow(self, indices, depth, X, y) -> TreeNode:
        node = TreeNode(default=self._majority(indices, y))
        pure = all(y[i] == y[indices[0]] for i in indices)
        if pure or depth == len(self.feature_order_):
            return node
        feature = self.feature_order_[depth]
        groups = {}
        for i in indices:
            groups.setdefault(X[i][feature], []).append(i)
        for value in sorted(groups, key=str):
            node.children[value] = self._grow(groups[value], depth + 1, X, y)
        return node

    def predict(self, x):
        node = self.root_
        for feature in self.feature_order_:
            if not node.children:
                break
            child = node.children.get(x[feature])
            if child is None:
                break
            node = child
        return node.default

    def predict_many(self, X: Sequence) -> list:
        return [self.predict(x) for x in X]


class ObliviousTreeChunker(TaggingChunker):
    """Chunker backed by the oblivious decision tree.

    Same word and POS context as the k-NN chunker; the tree trades the
    k-NN's exhaustive distance search for one indexed walk per word.
    """

    def __init__(
        self,
        representation: str = "IOB1",
        weighting: str = "ig",
        word_context: int = 4,
        pos_context: int = 4,
    ):
        self.representation = representation
        self.weighting = weighting
        self.word_context = word_context
        self.pos_context = pos_context

    def _make_core(self):
        return ObliviousTreeClassifier(weighting=self.weighting)

    def _spec(self) -> ContextSpec:
        return ContextSpec(
            word_left=self.word_context,
            word_right=self.word_context,
            pos_left=self.pos_context,
            pos_right=self.pos_context,
        )
