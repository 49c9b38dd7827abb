"""Top-down decision tree induction over POS-only context features.

Classic recursive induction: split each node on the remaining feature
with the highest information gain, stop when the node is pure or no
split gains anything, predict the majority class of the reached node.
No value grouping; categorical splits fan out one child per seen value,
and unseen values at prediction time fall back to the node's majority.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .base import TaggingChunker
from .features import ContextSpec
from .infogain import information_gain
from .knn import class_preference


@dataclass
class SplitNode:
    default: object
    feature: Optional[int] = None
    children: dict = field(default_factory=dict)


class DecisionTreeClassifier:
    """Gain-driven top-down induction over categorical feature tuples."""

    def fit(self, X: Sequence, y: Sequence):
        if not X:
            raise ValueError("cannot fit on an empty instance set")
        self.classes_ = class_preference(y)
        self._rank = {c: i for i, c in enumerate(self.classes_)}
        self.root_ = self._grow(list(range(len(X))), list(range(len(X[0]))), X, y)
        return self

    def _majority(self, indices, y):
        counts = Counter(y[i] for i in indices)
        return max(counts.items(), key=lambda kv: (kv[1], -self._rank[kv[0]]))[0]

    def _grow(self, indices, features, X, y) -> SplitNode:
        node = SplitNode(default=self._majority(indices, y))
        if not features or all(y[i] == y[indices[0]] for i in indices):
            return node
        classes = [y[i] for i in indices]
        gains = [(information_gain([X[i][f] for i in indices], classes), f) for f in features]
        best_gain, best = max(gains, key=lambda gf: (gf[0], -gf[1]))
        if best_gain <= 0.0:
            return node
        node.feature = best
        remaining = [f for f in features if f != best]
        groups = {}
        for i in indices:
            groups.setdefault(X[i][best], []).append(i)
        for value in sorted(groups, key=str):
            node.children[value] = self._grow(groups[value], remaining, X, y)
        return node

    def predict(self, x):
        node = self.root_
        while node.feature is not None:
            child = node.children.get(x[node.feature])
            if child is None:
                break
            node = child
        return node.default

    def predict_many(self, X: Sequence) -> list:
        return [self.predict(x) for x in X]


class DecisionTreeChunker(TaggingChunker):
    """POS-only chunker backed by top-down decision tree induction.

    Deliberately word-blind with a narrow context (two POS tags either
    side), the weakest of the trainable members.
    """

    def __init__(self, representation: str = "IOB1", pos_context: int = 2):
        self.representation = representation
        self.pos_context = pos_context

    def _make_core(self):
        return DecisionTreeClassifier()

    def _spec(self) -> ContextSpec:
        return ContextSpec(
            pos_left=self.pos_context,
            pos_right=self.pos_context,
            use_words=False,
        )
