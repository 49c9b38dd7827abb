"""Log-linear word classifier trained by generalized iterative scaling.

Model definition (the reference computation in the test suite re-derives
exactly this):

* An instance is a set of named predicates.  A joint feature is a
  (predicate, class) pair whose training count reaches ``cutoff``;
  rarer pairs are dropped.
* nf(x, c) is the number of live joint features instance x activates
  for class c, and the scaling constant is
  C = 1 + max nf(x, c) over the training instances and all classes, so
  the correction feature C - nf(x, c) is at least 1 and always attested.
* score(x, c) = sum of live feature weights + w_corr * (C - nf(x, c));
  class probabilities are the softmax of the scores.
* Each iteration updates every weight by log(empirical / expected) / C,
  the correction weight included.  Training log-likelihood is
  non-decreasing under this update; the trainer records it per
  iteration and refuses to continue past a numerical violation.

With all weights at zero (zero iterations) the model is uniform over
the training classes.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

import numpy as np

from .base import TaggingChunker
from .features import BOUNDARY, ContextSpec
from .knn import class_preference

_LL_SLACK = 1e-9


class MaxEntClassifier:
    """Conditional log-linear model over predicate sets, GIS trained."""

    def __init__(self, iterations: int = 100, cutoff: int = 2):
        if iterations < 0:
            raise ValueError(f"iterations must be >= 0: {iterations}")
        if cutoff < 1:
            raise ValueError(f"cutoff must be >= 1: {cutoff}")
        self.iterations = iterations
        self.cutoff = cutoff

    def fit(self, X: Sequence, y: Sequence):
        if not X:
            raise ValueError("cannot fit on an empty instance set")
        instances = [tuple(sorted(set(x))) for x in X]
        self.classes_ = class_preference(y)
        n_classes = len(self.classes_)
        class_of = {c: i for i, c in enumerate(self.classes_)}
        labels = np.array([class_of[c] for c in y], dtype=np.int32)

        joint_counts = Counter()
        for preds, cls in zip(instances, y):
            for p in preds:
                joint_counts[p, class_of[cls]] += 1
        live_pairs = {pair for pair, n in joint_counts.items() if n >= self.cutoff}
        predicates = sorted({p for p, _ in live_pairs})
        self.pred_index_ = {p: i for i, p in enumerate(predicates)}
        n_preds = len(predicates)

        self.live_ = np.zeros((n_preds, n_classes), dtype=bool)
        empirical = np.zeros((n_preds, n_classes))
        for (p, c), n in sorted(joint_counts.items()):
            if (p, c) in live_pairs:
                self.live_[self.pred_index_[p], c] = True
                empirical[self.pred_index_[p], c] = n

        # Flat (instance, predicate) incidence for vectorized passes.
        flat_inst, flat_pid = [], []
        for i, preds in enumerate(instances):
            for p in preds:
                pid = self.pred_index_.get(p)
                if pid is not None:
                    flat_inst.append(i)
                    flat_pid.append(pid)
        flat_inst = np.array(flat_inst, dtype=np.int64)
        flat_pid = np.array(flat_pid, dtype=np.int64)
        n = len(instances)

        nf = np.zeros((n, n_classes))
        for c in range(n_classes):
            nf[:, c] = np.bincount(
                flat_inst, weights=self.live_[flat_pid, c], minlength=n
            )
        self.c_ = float(nf.max()) + 1.0 if n else 1.0

        self.weights_ = np.zeros((n_preds, n_classes))
        self.correction_weight_ = 0.0
        empirical_corr = float(np.sum(self.c_ - nf[np.arange(n), labels]))

        def scores() -> np.ndarray:
            masked = self.weights_ * self.live_
            s = np.empty((n, n_classes))
            for c in range(n_classes):
                s[:, c] = np.bincount(
                    flat_inst, weights=masked[flat_pid, c], minlength=n
                )
            return s + self.correction_weight_ * (self.c_ - nf)

        def posterior() -> np.ndarray:
            s = scores()
            s -= s.max(axis=1, keepdims=True)
            e = np.exp(s)
            return e / e.sum(axis=1, keepdims=True)

        self.ll_history_ = []
        for iteration in range(self.iterations):
            probs = posterior()
            ll = float(np.log(probs[np.arange(n), labels]).sum())
            if self.ll_history_ and ll < self.ll_history_[-1] - _LL_SLACK:
                raise RuntimeError(
                    f"log-likelihood decreased at iteration {iteration}: "
                    f"{self.ll_history_[-1]} -> {ll}"
                )
            self.ll_history_.append(ll)
            expected = np.zeros((n_preds, n_classes))
            for c in range(n_classes):
                expected[:, c] = np.bincount(
                    flat_pid, weights=probs[flat_inst, c], minlength=n_preds
                )
            expected = np.maximum(expected, 1e-300)
            update = np.where(
                self.live_, np.log(np.maximum(empirical, 1e-300) / expected), 0.0
            )
            self.weights_ += update / self.c_
            expected_corr = max(float(np.sum(probs * (self.c_ - nf))), 1e-300)
            self.correction_weight_ += math.log(
                max(empirical_corr, 1e-300) / expected_corr
            ) / self.c_
        probs = posterior()
        self.ll_history_.append(float(np.log(probs[np.arange(n), labels]).sum()))
        return self

    def _class_scores(self, x) -> np.ndarray:
        pids = [self.pred_index_[p] for p in sorted(set(x)) if p in self.pred_index_]
        scores = np.zeros(len(self.classes_))
        nf = np.zeros(len(self.classes_))
        for pid in pids:
            scores += self.weights_[pid] * self.live_[pid]
            nf += self.live_[pid]
        return scores + self.correction_weight_ * (self.c_ - nf)

    def predict_proba(self, x) -> np.ndarray:
        """Class probabilities in ``classes_`` order."""
        s = self._class_scores(x)
        s -= s.max()
        e = np.exp(s)
        return e / e.sum()

    def predict(self, x):
        return self.classes_[int(np.argmax(self.predict_proba(x)))]

    def predict_many(self, X: Sequence) -> list:
        return [self.predict(x) for x in X]


class MaxEntChunker(TaggingChunker):
    """Chunker backed by the GIS-trained log-linear classifier.

    Evidence mixes simple and complex predicates: word and POS unigrams
    from ``left`` words before to ``right`` words after the focus, the
    POS bigrams spanning the focus, the one and two previously assigned
    tags, and the conjunction of the previous tag with the focus POS.
    Decoding is greedy left to right so that previous-tag predicates are
    available at prediction time.
    """

    def __init__(
        self,
        representation: str = "IOB1",
        left: int = 3,
        right: int = 2,
        iterations: int = 100,
        cutoff: int = 2,
    ):
        self.representation = representation
        self.left = left
        self.right = right
        self.iterations = iterations
        self.cutoff = cutoff

    def _make_core(self):
        return MaxEntClassifier(iterations=self.iterations, cutoff=self.cutoff)

    def _spec(self) -> ContextSpec:
        return ContextSpec(
            word_left=self.left,
            word_right=self.right,
            pos_left=self.left,
            pos_right=self.right,
            history=2,
        )

    def _instance(self, sentence, index: int, history: Sequence) -> tuple:
        def slot(values, k):
            at = index + k
            return values[at] if 0 <= at < len(values) else BOUNDARY

        words, pos = sentence.words, sentence.pos_tags
        prev1 = history[index - 1] if index >= 1 else BOUNDARY
        prev2 = history[index - 2] if index >= 2 else BOUNDARY
        preds = ["bias"]
        for k in range(-self.left, self.right + 1):
            preds.append(f"w[{k:+d}]={slot(words, k)}")
            preds.append(f"p[{k:+d}]={slot(pos, k)}")
        preds.append(f"p[-1]|p[0]={slot(pos, -1)}|{slot(pos, 0)}")
        preds.append(f"p[0]|p[+1]={slot(pos, 0)}|{slot(pos, +1)}")
        preds.append(f"t[-1]={prev1}")
        preds.append(f"t[-2]|t[-1]={prev2}|{prev1}")
        preds.append(f"t[-1]&p[0]={prev1}&{slot(pos, 0)}")
        return tuple(preds)
