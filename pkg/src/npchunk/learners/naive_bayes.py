"""Smoothed naive Bayes baseline.

Not a serious contender: it exists to pad the ensemble with an extra
independent-ish voter so that best-n selection has something to drop.
Standard product of add-one-smoothed per-feature conditionals times the
class prior, computed in log space.  Each feature reserves one smoothing
slot for values never seen with it, so unseen values stay finite.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from typing import Sequence

from .base import TaggingChunker
from .features import ContextSpec
from .knn import class_preference


class NaiveBayesClassifier:

    def fit(self, X: Sequence, y: Sequence):
        if not X:
            raise ValueError("cannot fit on an empty instance set")
        arity = len(X[0])
        self.classes_ = class_preference(y)
        self.class_counts_ = Counter(y)
        self.total_ = len(y)
        self.value_counts_ = [defaultdict(Counter) for _ in range(arity)]
        self.vocab_sizes_ = []
        for f in range(arity):
            seen = set()
            for x, cls in zip(X, y):
                self.value_counts_[f][cls][x[f]] += 1
                seen.add(x[f])
            self.vocab_sizes_.append(len(seen))
        return self

    def _log_posterior(self, x, cls) -> float:
        total = math.log(self.class_counts_[cls] / self.total_)
        for f, value in enumerate(x):
            num = self.value_counts_[f][cls][value] + 1
            den = self.class_counts_[cls] + self.vocab_sizes_[f] + 1
            total += math.log(num / den)
        return total

    def predict(self, x):
        # classes_ is in prior-then-name order, so scanning it breaks
        # posterior ties by prior as a side effect of strict >.
        best, best_score = None, -math.inf
        for cls in self.classes_:
            score = self._log_posterior(x, cls)
            if score > best_score:
                best, best_score = cls, score
        return best

    def predict_many(self, X: Sequence) -> list:
        return [self.predict(x) for x in X]


class NaiveBayesChunker(TaggingChunker):
    """Ensemble-filler chunker backed by naive Bayes."""

    def __init__(
        self,
        representation: str = "IOB1",
        word_context: int = 2,
        pos_context: int = 2,
    ):
        self.representation = representation
        self.word_context = word_context
        self.pos_context = pos_context

    def _make_core(self):
        return NaiveBayesClassifier()

    def _spec(self) -> ContextSpec:
        return ContextSpec(
            word_left=self.word_context,
            word_right=self.word_context,
            pos_left=self.pos_context,
            pos_right=self.pos_context,
        )
