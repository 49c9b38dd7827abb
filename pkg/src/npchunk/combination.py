"""Combining chunker outputs: representation voting, weighted voting,
pairwise voting, stacking, and best-n selection.

All combination happens in the bracket currency: every classifier's
output is first converted to per-word open and close booleans, the two
sides are combined independently word by word, and the winning stream
pair is turned back into chunks with the shortest-phrase pairing.

Voting weights and stacked meta-models are estimated on held-out tuning
output only, never on the data the first-level classifiers trained on.
Ties at a word resolve to False (no bracket), which never invents a
chunk the voters could not justify.  Vote sums iterate classifiers in
sorted-name order so that outputs are bit-identical under any
permutation of the ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from sklearn.base import BaseEstimator, clone

from .chunks import (
    BRACKETS,
    BracketStream,
    REPRESENTATIONS,
    pair_brackets,
    stream_to_codes,
    to_brackets,
)
from .evaluation import evaluate
from .learners.base import TaggingChunker, check_corpus
from .learners.cascade import CascadeChunker
from .learners.knn import KnnClassifier
from .learners.oblivious_tree import ObliviousTreeClassifier

SIDES = ("open", "close")

#: The voting methods, in the order they are usually reported.
VOTING_METHODS = ("majority", "totprecision", "tagprecision", "precisionrecall", "tagpair")

#: Meta-learner kinds accepted by the stacked combiner.
STACKING_KINDS = ("memory-based", "decision-tree")


class StreamBundle:
    """Aligned per-classifier bracket streams over one sentence list.

    Construction validates that every classifier covers the same
    sentences: equal sentence counts and equal per-sentence lengths.
    Classifier order is the mapping's insertion order.
    """

    def __init__(self, streams: Mapping[str, Sequence[BracketStream]]):
        if not streams:
            raise ValueError("a bundle needs at least one classifier")
        self.names: Tuple[str, ...] = tuple(streams)
        self._streams: Dict[str, Tuple[BracketStream, ...]] = {
            name: tuple(streams[name]) for name in self.names
        }
        first = self._streams[self.names[0]]
        for name in self.names[1:]:
            other = self._streams[name]
            if len(other) != len(first):
                raise ValueError(
                    f"classifier {name!r} covers {len(other)} sentences, "
                    f"expected {len(first)}"
                )
            for i, (a, b) in enumerate(zip(first, other)):
                if len(a) != len(b):
                    raise ValueError(
                        f"classifier {name!r} sentence {i} has length "
                        f"{len(b)}, expected {len(a)}"
                    )

    def __len__(self) -> int:
        return len(self._streams[self.names[0]])

    def stream(self, name: str) -> Tuple[BracketStream, ...]:
        return self._streams[name]

    def lengths(self) -> list:
        return [len(s) for s in self._streams[self.names[0]]]

    def side(self, name: str, sentence: int, side: str) -> tuple:
        stream = self._streams[name][sentence]
        return stream.opens if side == "open" else stream.closes

    def select(self, names: Iterable) -> "StreamBundle":
        return StreamBundle({name: self._streams[name] for name in names})


def gold_streams(gold: Sequence, lengths: Sequence) -> list:
    """Per-sentence bracket streams of gold span sets."""
    if len(gold) != len(lengths):
        raise ValueError(f"{len(gold)} gold sets for {len(lengths)} lengths")
    return [to_brackets(g, n) for g, n in zip(gold, lengths)]


def majority_streams(stream_lists: Sequence) -> list:
    """Per-word, per-side majority of several aligned stream lists.

    Expects an odd voter count so that no word can tie.
    """
    if not stream_lists:
        raise ValueError("no streams to combine")
    if len(stream_lists) % 2 == 0:
        raise ValueError(f"majority needs an odd voter count, got {len(stream_lists)}")
    counts = {len(streams) for streams in stream_lists}
    if len(counts) != 1:
        raise ValueError(f"voters cover different sentence counts: {sorted(counts)}")
    combined = []
    half = len(stream_lists) / 2.0
    for streams in zip(*stream_lists):
        if len({len(s) for s in streams}) != 1:
            raise ValueError("voters disagree on a sentence length")
        opens = [sum(s.opens[i] for s in streams) > half for i in range(len(streams[0]))]
        closes = [sum(s.closes[i] for s in streams) > half for i in range(len(streams[0]))]
        combined.append(BracketStream(opens, closes))
    return combined


def combine_internal(outputs: Mapping[str, Sequence[BracketStream]]) -> list:
    """Majority-combine one learner's five representation outputs.

    ``outputs`` maps each of the five representations to that run's
    per-sentence streams (tagging-scheme output must already be decoded
    and converted).  Five voters per word and side, so no ties.
    """
    missing = [rep for rep in REPRESENTATIONS if rep not in outputs]
    extra = [rep for rep in outputs if rep not in REPRESENTATIONS]
    if missing or extra:
        raise ValueError(
            f"expected exactly the five representations {REPRESENTATIONS}; "
            f"missing {missing}, unexpected {extra}"
        )
    return majority_streams([outputs[rep] for rep in REPRESENTATIONS])


@dataclass(frozen=True)
class VoteWeights:
    """Tuning-data statistics backing the weighted voting methods.

    ``accuracy`` is per (classifier, side); ``precision`` and ``recall``
    are per (classifier, side, output value) with zero-denominator cells
    backed off to the classifier's side accuracy; ``pair_tables`` maps
    (classifier pair sorted by name, side, output pair) to the empirical
    distribution of the gold boolean as a (p_true, p_false) tuple.
    """

    method: str
    accuracy: dict = field(default_factory=dict)
    precision: dict = field(default_factory=dict)
    recall: dict = field(default_factory=dict)
    pair_tables: dict = field(default_factory=dict)


def estimate_weights(bundle: StreamBundle, gold: Sequence, method: str) -> VoteWeights:
    """Tally the tuning statistics every weighted method needs.

    ``gold`` holds per-sentence gold span sets aligned with the bundle.
    All tables are computed regardless of ``method``; the method name is
    recorded for dispatch in ``vote``.
    """
    if method not in VOTING_METHODS:
        raise ValueError(f"unknown voting method {method!r}; expected one of {VOTING_METHODS}")
    if len(bundle) == 0:
        raise ValueError("cannot estimate weights on an empty tuning set")
    truth = gold_streams(gold, bundle.lengths())

    accuracy = {}
    precision = {}
    recall = {}
    for name in bundle.names:
        for side in SIDES:
            correct = total = 0
            assigned = {True: 0, False: 0}
            assigned_correct = {True: 0, False: 0}
            in_gold = {True: 0, False: 0}
            for i in range(len(bundle)):
                out = bundle.side(name, i, side)
                ref = truth[i].opens if side == "open" else truth[i].closes
                for o, g in zip(out, ref):
                    total += 1
                    assigned[o] += 1
                    in_gold[g] += 1
                    if o == g:
                        correct += 1
                        assigned_correct[o] += 1
            acc = correct / total
            accuracy[name, side] = acc
            for v in (False, True):
                precision[name, side, v] = (
                    assigned_correct[v] / assigned[v] if assigned[v] else acc
                )
                recall[name, side, v] = (
                    assigned_correct[v] / in_gold[v] if in_gold[v] else acc
                )

    pair_tables = {}
    for a, b in combinations(sorted(bundle.names), 2):
        for side in SIDES:
            counts = {}
            for i in range(len(bundle)):
                out_a = bundle.side(a, i, side)
                out_b = bundle.side(b, i, side)
                ref = truth[i].opens if side == "open" else truth[i].closes
                for va, vb, g in zip(out_a, out_b, ref):
                    cell = counts.setdefault((va, vb), [0, 0])
                    cell[0 if g else 1] += 1
            pair_tables[a, b, side] = {
                pair: (t / (t + f), f / (t + f)) for pair, (t, f) in counts.items()
            }

    return VoteWeights(
        method=method,
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        pair_tables=pair_tables,
    )


def _vote_word(names: Sequence, outputs: Mapping, side: str, weights: VoteWeights) -> bool:
    # A unanimous word needs no arbitration; weighting and pair tables
    # only referee disagreement.  This also keeps degenerate tuning
    # statistics (all-zero precisions, inverted pair cells) from
    # overruling an output every classifier agrees on.
    values = {outputs[name] for name in names}
    if len(values) == 1:
        return values.pop()
    score = {True: 0.0, False: 0.0}
    method = weights.method
    if method == "tagpair":
        for a, b in combinations(names, 2):
            table = weights.pair_tables[a, b, side]
            cell = table.get((outputs[a], outputs[b]))
            if cell is None:
                # Output pair never seen while tuning: fall back to the
                # two classifiers' per-tag precision votes.
                score[outputs[a]] += weights.precision[a, side, outputs[a]]
                score[outputs[b]] += weights.precision[b, side, outputs[b]]
            else:
                score[True] += cell[0]
                score[False] += cell[1]
    else:
        for name in names:
            value = outputs[name]
            if method == "majority":
                score[value] += 1.0
            elif method == "totprecision":
                score[value] += weights.accuracy[name, side]
            elif method == "tagprecision":
                score[value] += weights.precision[name, side, value]
            else:  # precisionrecall
                score[value] += weights.precision[name, side, value]
                score[not value] += 1.0 - weights.recall[name, side, not value]
    return score[True] > score[False]


def vote(bundle: StreamBundle, weights: VoteWeights) -> list:
    """Combine a bundle per word and side under one voting method."""
    names = sorted(bundle.names)
    combined = []
    for i in range(len(bundle)):
        length = len(bundle.stream(bundle.names[0])[i])
        decided = {}
        for side in SIDES:
            outputs_by_name = {name: bundle.side(name, i, side) for name in names}
            decided[side] = [
                _vote_word(names, {n: outputs_by_name[n][j] for n in names}, side, weights)
                for j in range(length)
            ]
        combined.append(BracketStream(decided["open"], decided["close"]))
    return combined


class VotingCombiner(BaseEstimator):
    """Estimator wrapper around ``estimate_weights`` and ``vote``.

    ``fit`` takes the tuning bundle and gold span sets; ``predict``
    takes the bundle to combine and returns per-sentence streams.
    Majority voting needs no tuning statistics, so it alone may be used
    unfitted.
    """

    def __init__(self, method: str = "majority"):
        self.method = method

    def fit(self, bundle: StreamBundle, gold: Sequence):
        self.weights_ = estimate_weights(bundle, gold, self.method)
        return self

    def predict(self, bundle: StreamBundle) -> list:
        if not hasattr(self, "weights_"):
            if self.method != "majority":
                raise RuntimeError(f"method {self.method!r} requires fit on tuning data")
            self.weights_ = VoteWeights(method="majority")
        return vote(bundle, self.weights_)

    def predict_phrases(self, bundle: StreamBundle) -> list:
        return [pair_brackets(s) for s in self.predict(bundle)]


class StackedCombiner(BaseEstimator):
    """Second-level classifier over first-level bracket decisions.

    One meta-model per side is trained on per-word instances whose
    features are the classifier booleans in bundle order, optionally
    followed by the focus word's POS tag, with the gold boolean as the
    class.  ``kind`` picks the meta-learner: "memory-based" for the
    k-NN core, "decision-tree" for the oblivious tree core.

    The memory-based meta-learner uses k=1: with so few feature values,
    larger k pulls in whole far-away agreement patterns that can outvote
    an exactly matching one.
    """

    def __init__(self, kind: str = "memory-based", use_pos: bool = False, k: int = 1):
        self.kind = kind
        self.use_pos = use_pos
        self.k = k

    def _make_core(self):
        if self.kind == "memory-based":
            return KnnClassifier(k=self.k)
        if self.kind == "decision-tree":
            return ObliviousTreeClassifier()
        raise ValueError(f"unknown stacking kind {self.kind!r}; expected one of {STACKING_KINDS}")

    def _instances(self, bundle: StreamBundle, side: str, corpus) -> list:
        X = []
        for i in range(len(bundle)):
            outputs = [bundle.side(name, i, side) for name in self.names_]
            for j in range(len(outputs[0])):
                features = [out[j] for out in outputs]
                if self.use_pos:
                    features.append(corpus[i].pos_tags[j])
                X.append(tuple(features))
        return X

    def _check_corpus_arg(self, bundle: StreamBundle, corpus):
        if not self.use_pos:
            return None
        if corpus is None:
            raise ValueError("use_pos=True requires the sentence corpus")
        corpus = check_corpus(corpus)
        if [len(s) for s in corpus] != bundle.lengths():
            raise ValueError("corpus is not aligned with the bundle")
        return corpus

    def fit(self, bundle: StreamBundle, gold: Sequence, corpus=None):
        corpus = self._check_corpus_arg(bundle, corpus)
        if len(bundle) == 0:
            raise ValueError("cannot stack on an empty tuning set")
        self.names_ = bundle.names
        truth = gold_streams(gold, bundle.lengths())
        self.cores_ = {}
        for side in SIDES:
            X = self._instances(bundle, side, corpus)
            y = []
            for stream in truth:
                y.extend(stream.opens if side == "open" else stream.closes)
            self.cores_[side] = self._make_core().fit(X, y)
        return self

    def predict(self, bundle: StreamBundle, corpus=None) -> list:
        if not hasattr(self, "cores_"):
            raise RuntimeError("StackedCombiner is not fitted; call fit first")
        missing = [n for n in self.names_ if n not in bundle.names]
        if missing:
            raise ValueError(f"bundle lacks fitted classifiers: {missing}")
        corpus = self._check_corpus_arg(bundle, corpus)
        decided = {}
        for side in SIDES:
            labels = self.cores_[side].predict_many(self._instances(bundle, side, corpus))
            decided[side] = labels
        streams = []
        at = 0
        for length in bundle.lengths():
            streams.append(
                BracketStream(
                    decided["open"][at : at + length],
                    decided["close"][at : at + length],
                )
            )
            at += length
        return streams

    def predict_phrases(self, bundle: StreamBundle, corpus=None) -> list:
        return [pair_brackets(s) for s in self.predict(bundle, corpus)]


@dataclass(frozen=True)
class Ranking:
    """Classifiers ordered by tuning F, best first, with the top-n cut."""

    names: tuple
    scores: tuple
    n: int

    @property
    def selected(self) -> tuple:
        return self.names[: self.n]


def rank_classifiers(bundle: StreamBundle, gold: Sequence) -> list:
    """(name, phrase F) pairs sorted best first, ties broken by name."""
    lengths = bundle.lengths()
    scored = []
    for name in bundle.names:
        phrases = [pair_brackets(s) for s in bundle.stream(name)]
        report = evaluate(phrases, gold, lengths)
        scored.append((name, report.f_score))
    return sorted(scored, key=lambda pair: (-pair[1], pair[0]))


def rank_and_select(bundle: StreamBundle, gold: Sequence, n: int) -> Ranking:
    """Rank on tuning F and keep the best ``n`` classifiers."""
    if not 1 <= n <= len(bundle.names):
        raise ValueError(f"n must be in 1..{len(bundle.names)}: {n}")
    ranked = rank_classifiers(bundle, gold)
    return Ranking(
        names=tuple(name for name, _ in ranked),
        scores=tuple(score for _, score in ranked),
        n=n,
    )


class InternalVotingChunker(TaggingChunker):
    """One learner run over all five representations, majority combined.

    ``base`` is any tagging chunker; a clone per representation is
    fitted and the five bracket-converted outputs are combined word by
    word.  ``cascade``, when given, is a dict of ``CascadeChunker``
    parameters applied to the tagging-scheme members (the bracket member
    cannot cascade and runs plain).
    """

    def __init__(self, base, cascade: Optional[dict] = None):
        self.base = base
        self.cascade = cascade

    def fit(self, X, y=None):
        corpus = check_corpus(X, y, require_gold=True)
        self.representation_ = BRACKETS
        self.members_ = {}
        for rep in REPRESENTATIONS:
            member = clone(self.base)
            member.set_params(representation=rep)
            if self.cascade is not None and rep != BRACKETS:
                member = CascadeChunker(member, **self.cascade)
            self.members_[rep] = member.fit(corpus)
        return self

    def member_streams(self, X) -> dict:
        """Per-representation stream lists, for inspection and reporting."""
        self._check_fitted()
        corpus = check_corpus(X)
        return {rep: member.predict_streams(corpus) for rep, member in self.members_.items()}

    def predict_streams(self, X) -> list:
        return combine_internal(self.member_streams(X))

    def predict_tags(self, X) -> list:
        return [stream_to_codes(s) for s in self.predict_streams(X)]
