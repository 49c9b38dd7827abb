"""Two-stage cascading: re-predict with first-stage tags as features.

Stage one is any tagging chunker with its full context.  Stage two
retrains the same kind of classifier on a smaller context that adds the
stage-one tags in a window around the focus word, then re-labels.  The
stage-one tags for the *training* corpus come from k-fold
cross-prediction inside the training data; predicting them in-sample
would hand stage two an unrealistically clean tag context.
"""

from __future__ import annotations

import random
from typing import Optional

from sklearn.base import clone

from ..chunks import BRACKETS
from ..corpus import Corpus
from .base import (
    TaggingChunker,
    build_instances,
    check_corpus,
    check_representation,
    predict_labels,
    training_targets,
)
from .features import ContextSpec


def cross_predict_tags(base, corpus: Corpus, folds: int, random_state: int) -> list:
    """Tag every training sentence with a model that never saw it.

    Sentences are dealt into ``folds`` groups by a seeded shuffle; each
    group is tagged by a fresh clone of ``base`` fitted on the others.
    The groups partition the corpus, so exactly one prediction exists
    per sentence.
    """
    n = len(corpus)
    if n < 2:
        raise ValueError("cross-prediction needs at least 2 sentences")
    folds = min(folds, n)
    order = list(range(n))
    random.Random(random_state).shuffle(order)
    fold_of = {idx: pos % folds for pos, idx in enumerate(order)}
    tags: list = [None] * n
    for fold in range(folds):
        held = [i for i in range(n) if fold_of[i] == fold]
        rest = [corpus[i] for i in range(n) if fold_of[i] != fold]
        model = clone(base).fit(Corpus(tuple(rest)))
        for i, sentence_tags in zip(held, model.predict_tags([corpus[i] for i in held])):
            tags[i] = sentence_tags
    return tags


class CascadeChunker(TaggingChunker):
    """Meta-estimator adding a second, tag-informed pass to a chunker.

    Only valid for the tagging-scheme representations; the bracket
    representation has no per-word tags for stage two to feed on.
    """

    def __init__(
        self,
        base,
        word_context: int = 2,
        pos_context: int = 2,
        tag_window: int = 2,
        folds: int = 5,
        random_state: int = 0,
    ):
        self.base = base
        self.word_context = word_context
        self.pos_context = pos_context
        self.tag_window = tag_window
        self.folds = folds
        self.random_state = random_state

    def fit(self, X, y=None):
        corpus = check_corpus(X, y, require_gold=True)
        rep = check_representation(self.base.representation)
        if rep == BRACKETS:
            raise ValueError("cascading applies only to the tagging schemes, not brackets")
        self.representation_ = rep
        self.stage1_ = clone(self.base).fit(corpus)
        self.known_words_ = self.stage1_.known_words_
        base_spec = self.stage1_.spec_
        self.spec_ = ContextSpec(
            word_left=self.word_context,
            word_right=self.word_context,
            pos_left=self.pos_context,
            pos_right=self.pos_context,
            stage_window=self.tag_window,
            use_words=base_spec.use_words,
        )
        stage1_tags = cross_predict_tags(self.base, corpus, self.folds, self.random_state)
        targets = training_targets(corpus, rep)
        X2, y2 = build_instances(corpus, self.spec_, targets, stage_tags=stage1_tags)
        self.stage2_core_ = self.stage1_._make_core().fit(X2, y2)
        return self

    def predict_tags(self, X) -> list:
        self._check_fitted()
        corpus = check_corpus(X)
        stage1_tags = self.stage1_.predict_tags(corpus)
        out = []
        for sentence, s1 in zip(corpus, stage1_tags):
            prepared = self._prepare(sentence)
            out.append(predict_labels(self.stage2_core_, prepared, self.spec_, stage_tags=s1))
        return out


def run_cascade(
    learner,
    train,
    data,
    scheme: Optional[str] = None,
    enabled: bool = True,
    **config,
) -> list:
    """Train a (possibly cascaded) chunker and tag ``data``.

    With ``enabled=False`` this is plain stage-one training and
    prediction.  ``scheme`` overrides the learner's configured output
    representation; remaining keyword arguments go to CascadeChunker.
    """
    base = clone(learner)
    if scheme is not None:
        base.set_params(representation=scheme)
    if not enabled:
        return base.fit(train).predict_tags(data)
    return CascadeChunker(base, **config).fit(train).predict_tags(data)
