"""Shared estimator plumbing for the per-word chunk classifiers.

Every learner follows the same scheme: fit on an annotated corpus,
classify one word at a time from a feature view of its context, and
emit per-sentence tag sequences under the configured output
representation.  For the four tagging schemes that is one classifier
core; for the bracket representation it is two, one deciding whether a
word opens a chunk and one whether it closes one.
"""

from __future__ import annotations

import pickle
from typing import Optional, Sequence

from sklearn.base import BaseEstimator

from ..chunks import (
    BRACKETS,
    BracketStream,
    REPRESENTATIONS,
    TagScheme,
    codes_to_stream,
    decode,
    encode,
    pair_brackets,
    stream_to_codes,
    to_brackets,
)
from ..corpus import Corpus, Sentence
from ..evaluation import evaluate_corpus
from .features import ContextSpec, extract_features, mask_unknown_words

MODEL_FORMAT = "npchunk-model"
MODEL_VERSION = 1


def check_corpus(X, y: Optional[Sequence] = None, require_gold: bool = False) -> Corpus:
    """Coerce estimator input into a Corpus, attaching ``y`` as gold.

    Accepts a ``Corpus`` or any iterable of ``Sentence``.  ``y``, when
    given, is a per-sentence collection of (start, end) spans that
    overrides the sentences' own gold annotation.
    """
    if isinstance(X, Corpus):
        sentences = list(X.sentences)
    else:
        sentences = list(X)
        for i, s in enumerate(sentences):
            if not isinstance(s, Sentence):
                raise TypeError(f"element {i} is not a Sentence: {type(s).__name__}")
    if y is not None:
        if len(y) != len(sentences):
            raise ValueError(f"{len(y)} annotations for {len(sentences)} sentences")
        sentences = [s.with_gold(spans) for s, spans in zip(sentences, y)]
    corpus = Corpus(tuple(sentences))
    if require_gold:
        corpus.gold_phrases()
    return corpus


def check_representation(value) -> str:
    """Canonicalize a representation name, raising on anything unknown."""
    if isinstance(value, TagScheme):
        return value.value
    if value in REPRESENTATIONS:
        return value
    raise ValueError(f"unknown representation {value!r}; expected one of {REPRESENTATIONS}")


def training_targets(corpus: Corpus, representation: str) -> list:
    """Per-sentence label sequences for a representation.

    Tag strings for the tagging schemes; for brackets, a pair of boolean
    label sequences (opens, closes) per sentence.
    """
    targets = []
    for sentence in corpus:
        if representation == BRACKETS:
            stream = to_brackets(sentence.gold, len(sentence))
            targets.append((list(stream.opens), list(stream.closes)))
        else:
            targets.append(encode(sentence.gold, len(sentence), representation))
    return targets


def build_instances(
    corpus: Corpus,
    spec: ContextSpec,
    labels: Sequence,
    stage_tags: Optional[Sequence] = None,
) -> tuple:
    """Flatten a corpus into per-word (feature tuple, label) pairs.

    ``labels`` holds one label sequence per sentence and doubles as the
    history source when the spec uses predicted-tag slots (training uses
    the true previous labels).  ``stage_tags`` supplies first-stage tag
    sequences when the spec has a stage window.
    """
    X, y = [], []
    for i, sentence in enumerate(corpus):
        stags = stage_tags[i] if stage_tags is not None else None
        for j in range(len(sentence)):
            X.append(extract_features(sentence, j, spec, labels[i], stags))
            y.append(labels[i][j])
    return X, y


def predict_labels(
    core,
    sentence: Sentence,
    spec: ContextSpec,
    stage_tags: Optional[Sequence] = None,
) -> list:
    """Label one sentence word by word, greedy left to right.

    With no predicted-tag slots in the spec the words are independent
    and classified in one batch; otherwise each word's features include
    the labels already assigned to its left.
    """
    if spec.history == 0:
        X = [extract_features(sentence, j, spec, (), stage_tags) for j in range(len(sentence))]
        return list(core.predict_many(X))
    out = []
    for j in range(len(sentence)):
        out.append(core.predict(extract_features(sentence, j, spec, out, stage_tags)))
    return out


class TaggingChunker(BaseEstimator):
    """Base class wiring a word classifier core into a chunker.

    Subclasses provide the core via ``_make_core`` and the feature
    layout via ``_spec``, and declare their own constructor parameters
    (including ``representation``) so that ``get_params`` and ``clone``
    work in the usual way.  Learners whose features are not plain
    context slots override ``_instance`` as well.
    """

    def _make_core(self):
        raise NotImplementedError

    def _spec(self) -> ContextSpec:
        raise NotImplementedError

    def _instance(self, sentence: Sentence, index: int, history: Sequence) -> tuple:
        return extract_features(sentence, index, self.spec_, history)

    def fit(self, X, y=None):
        """Train on an annotated corpus (or sentence iterable plus spans)."""
        corpus = check_corpus(X, y, require_gold=True)
        rep = check_representation(self.representation)
        self.representation_ = rep
        self.spec_ = self._spec()
        self.known_words_ = frozenset(w for s in corpus for w in s.words)
        targets = training_targets(corpus, rep)
        if rep == BRACKETS:
            self.open_core_ = self._fit_core(corpus, [t[0] for t in targets])
            self.close_core_ = self._fit_core(corpus, [t[1] for t in targets])
        else:
            self.core_ = self._fit_core(corpus, targets)
        return self

    def _fit_core(self, corpus: Corpus, labels: Sequence):
        X, y = [], []
        for i, sentence in enumerate(corpus):
            for j in range(len(sentence)):
                X.append(self._instance(sentence, j, labels[i]))
                y.append(labels[i][j])
        return self._make_core().fit(X, y)

    def _check_fitted(self):
        if not hasattr(self, "representation_"):
            raise RuntimeError(f"{type(self).__name__} is not fitted; call fit first")

    def _prepare(self, sentence: Sentence) -> Sentence:
        if self.spec_.use_words:
            return mask_unknown_words(sentence, self.known_words_)
        return sentence

    def _label_sentence(self, core, sentence: Sentence) -> list:
        if self.spec_.history == 0:
            X = [self._instance(sentence, j, ()) for j in range(len(sentence))]
            return list(core.predict_many(X))
        out = []
        for j in range(len(sentence)):
            out.append(core.predict(self._instance(sentence, j, out)))
        return out

    def predict_tags(self, X) -> list:
        """Per-sentence tag sequences under the fitted representation.

        For the bracket representation these are the per-word bracket
        code strings.
        """
        self._check_fitted()
        corpus = check_corpus(X)
        out = []
        for sentence in corpus:
            prepared = self._prepare(sentence)
            if self.representation_ == BRACKETS:
                opens = self._label_sentence(self.open_core_, prepared)
                closes = self._label_sentence(self.close_core_, prepared)
                out.append(stream_to_codes(BracketStream(opens, closes)))
            else:
                out.append(self._label_sentence(self.core_, prepared))
        return out

    def predict_streams(self, X) -> list:
        """Per-sentence open/close bracket streams."""
        self._check_fitted()
        corpus = check_corpus(X)
        streams = []
        for sentence, tags in zip(corpus, self.predict_tags(corpus)):
            if self.representation_ == BRACKETS:
                streams.append(codes_to_stream(tags))
            else:
                streams.append(to_brackets(decode(tags, self.representation_), len(sentence)))
        return streams

    def predict(self, X) -> list:
        """Per-sentence chunk span sets."""
        return [pair_brackets(stream) for stream in self.predict_streams(X)]

    def score(self, X, y=None) -> float:
        """Phrase F score against gold annotation, for ecosystem use."""
        corpus = check_corpus(X, y, require_gold=True)
        return evaluate_corpus(self.predict(corpus), corpus).f_score


def save_model(model, path) -> None:
    """Persist any fitted estimator as a versioned model file."""
    payload = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "estimator": model}
    with open(path, "wb") as handle:
        pickle.dump(payload, handle)


def load_model(path):
    """Load a model file written by ``save_model``."""
    with open(path, "rb") as handle:
        payload = pickle.load(handle)
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path} is not a model file")
    if payload.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')}")
    return payload["estimator"]
