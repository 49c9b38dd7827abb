"""Voting, stacking, ranking, and internal combination."""

import random
from itertools import combinations, permutations

import pytest

from npchunk import (
    BracketStream,
    Corpus,
    InternalVotingChunker,
    KnnChunker,
    Span,
    StackedCombiner,
    StreamBundle,
    VoteWeights,
    VotingCombiner,
    combine_internal,
    estimate_weights,
    gold_streams,
    majority_streams,
    rank_and_select,
    rank_classifiers,
    to_brackets,
    vote,
)

from conftest import random_phrase_set, tiny_sentence


def stream_from(opens, closes, length):
    return BracketStream(
        [i in opens for i in range(length)], [i in closes for i in range(length)]
    )


def hand_fixture():
    """One 10-word sentence, gold spans (1,2), (5,5), (8,9), and three
    classifiers: A perfect, B missing one chunk edge per side, C noisy."""
    gold = [frozenset({Span(1, 2), Span(5, 5), Span(8, 9)})]
    streams = {
        "A": [stream_from({1, 5, 8}, {2, 5, 9}, 10)],
        "B": [stream_from({1, 5}, {2, 9}, 10)],
        "C": [stream_from({0, 8}, {0, 2, 9}, 10)],
    }
    return StreamBundle(streams), gold


def random_bundle(rng, n_classifiers=None):
    n = n_classifiers or rng.randrange(3, 8)
    sentence_lengths = [rng.randrange(1, 9) for _ in range(rng.randrange(1, 4))]
    gold = [random_phrase_set(rng, length) for length in sentence_lengths]
    streams = {}
    for c in range(n):
        per_sentence = []
        for length in sentence_lengths:
            per_sentence.append(
                BracketStream(
                    [rng.random() < 0.35 for _ in range(length)],
                    [rng.random() < 0.35 for _ in range(length)],
                )
            )
        streams[f"c{c}"] = per_sentence
    return StreamBundle(streams), gold


class TestStreamBundle:
    def test_alignment_enforced(self):
        with pytest.raises(ValueError):
            StreamBundle(
                {
                    "a": [stream_from({0}, {0}, 3)],
                    "b": [stream_from({0}, {0}, 4)],
                }
            )
        with pytest.raises(ValueError):
            StreamBundle({"a": [stream_from(set(), set(), 3)], "b": []})

    def test_select_preserves_given_order(self):
        bundle, _ = hand_fixture()
        sub = bundle.select(["C", "A"])
        assert sub.names == ("C", "A")


class TestCombineInternal:
    def make_outputs(self, stream, n=5):
        reps = ("IOB1", "IOB2", "IOE1", "IOE2", "O+C")
        return {rep: [stream] for rep in reps[:n]}

    def test_unanimous_five(self):
        stream = stream_from({1}, {2}, 4)
        assert combine_internal(self.make_outputs(stream)) == [stream]

    def test_three_of_five_majority(self):
        yes = stream_from({0}, {0}, 1)
        no = stream_from(set(), set(), 1)
        outputs = {
            "IOB1": [yes], "IOB2": [yes], "IOE1": [yes], "IOE2": [no], "O+C": [no]
        }
        assert combine_internal(outputs) == [yes]

    def test_wrong_representation_count_rejected(self):
        stream = stream_from({0}, {0}, 1)
        with pytest.raises(ValueError):
            combine_internal(self.make_outputs(stream, n=4))
        with pytest.raises(ValueError):
            combine_internal({**self.make_outputs(stream), "IOB3": [stream]})

    def test_length_mismatch_rejected(self):
        outputs = self.make_outputs(stream_from({0}, {0}, 2))
        outputs["O+C"] = [stream_from({0}, {0}, 3)]
        with pytest.raises(ValueError):
            combine_internal(outputs)

    def test_even_voter_count_rejected(self):
        with pytest.raises(ValueError):
            majority_streams([[stream_from({0}, {0}, 1)]] * 2)


class TestEstimateWeights:
    def test_perfect_classifier_has_unit_tables(self):
        bundle, gold = hand_fixture()
        weights = estimate_weights(bundle, gold, "precisionrecall")
        for side in ("open", "close"):
            assert weights.accuracy["A", side] == 1.0
            for value in (True, False):
                assert weights.precision["A", side, value] == 1.0
                assert weights.recall["A", side, value] == 1.0

    def test_hand_tallied_open_side_tables(self):
        bundle, gold = hand_fixture()
        weights = estimate_weights(bundle, gold, "precisionrecall")
        assert weights.accuracy["B", "open"] == pytest.approx(0.9)
        assert weights.precision["B", "open", True] == pytest.approx(1.0)
        assert weights.precision["B", "open", False] == pytest.approx(7 / 8)
        assert weights.recall["B", "open", True] == pytest.approx(2 / 3)
        assert weights.recall["B", "open", False] == pytest.approx(1.0)
        assert weights.accuracy["C", "open"] == pytest.approx(0.7)
        assert weights.precision["C", "open", True] == pytest.approx(0.5)
        assert weights.precision["C", "open", False] == pytest.approx(0.75)
        assert weights.recall["C", "open", True] == pytest.approx(1 / 3)
        assert weights.recall["C", "open", False] == pytest.approx(6 / 7)

    def test_hand_tallied_pair_table(self):
        bundle, gold = hand_fixture()
        weights = estimate_weights(bundle, gold, "tagpair")
        table = weights.pair_tables["A", "B", "open"]
        assert table[False, False] == (0.0, 1.0)
        assert table[True, True] == (1.0, 0.0)
        assert table[True, False] == (1.0, 0.0)

    def test_constant_false_classifier_backs_off_to_accuracy(self):
        gold = [frozenset({Span(0, 0)})]
        bundle = StreamBundle({"never": [stream_from(set(), set(), 2)]})
        weights = estimate_weights(bundle, gold, "tagprecision")
        # never assigns True: precision(True) backs off to side accuracy
        assert weights.precision["never", "open", True] == weights.accuracy["never", "open"]
        assert weights.accuracy["never", "open"] == pytest.approx(0.5)

    def test_empty_tuning_set_rejected(self):
        with pytest.raises(ValueError):
            estimate_weights(StreamBundle({"a": []}), [], "majority")

    def test_unknown_method_rejected(self):
        bundle, gold = hand_fixture()
        with pytest.raises(ValueError):
            estimate_weights(bundle, gold, "borda")


class TestVote:
    def test_majority_two_of_three(self):
        bundle = StreamBundle(
            {
                "a": [stream_from({0}, set(), 1)],
                "b": [stream_from({0}, set(), 1)],
                "c": [stream_from(set(), {0}, 1)],
            }
        )
        out = vote(bundle, VoteWeights(method="majority"))
        assert out == [stream_from({0}, set(), 1)]

    def test_totprecision_strong_voter_beats_two_weak(self):
        bundle = StreamBundle(
            {
                "strong": [stream_from({0}, set(), 1)],
                "weak1": [stream_from(set(), set(), 1)],
                "weak2": [stream_from(set(), set(), 1)],
            }
        )
        accuracy = {}
        for side in ("open", "close"):
            accuracy["strong", side] = 0.9
            accuracy["weak1", side] = 0.4
            accuracy["weak2", side] = 0.4
        out = vote(bundle, VoteWeights(method="totprecision", accuracy=accuracy))
        assert out[0].opens == (True,)

    def test_ties_resolve_to_no_bracket(self):
        bundle = StreamBundle(
            {
                "a": [stream_from({0}, {0}, 1)],
                "b": [stream_from(set(), set(), 1)],
            }
        )
        out = vote(bundle, VoteWeights(method="majority"))
        assert out[0].opens == (False,) and out[0].closes == (False,)

    def test_tagpair_matches_brute_force_recomputation(self):
        bundle, gold = hand_fixture()
        weights = estimate_weights(bundle, gold, "tagpair")
        got = vote(bundle, weights)

        truth = gold_streams(gold, bundle.lengths())
        names = sorted(bundle.names)
        expected = []
        for i in range(len(bundle)):
            length = bundle.lengths()[i]
            sides = {}
            for side in ("open", "close"):
                decided = []
                for j in range(length):
                    score = {True: 0.0, False: 0.0}
                    for a, b in combinations(names, 2):
                        # recount the tuning tally for this pair/outputs
                        tally = {True: 0, False: 0}
                        for s2 in range(len(bundle)):
                            for j2 in range(bundle.lengths()[s2]):
                                if (
                                    bundle.side(a, s2, side)[j2]
                                    == bundle.side(a, i, side)[j]
                                    and bundle.side(b, s2, side)[j2]
                                    == bundle.side(b, i, side)[j]
                                ):
                                    ref = (
                                        truth[s2].opens
                                        if side == "open"
                                        else truth[s2].closes
                                    )
                                    tally[ref[j2]] += 1

                                total = tally[True] + tally[False]
                        score[True] += tally[True] / total
                        score[False] += tally[False] / total
                    decided.append(score[True] > score[False])
                sides[side] = decided
            expected.append(BracketStream(sides["open"], sides["close"]))
        assert got == expected


class TestVotingProperties:
    def test_unanimity_across_methods(self):
        rng = random.Random(51)
        for _ in range(40):
            bundle, gold = random_bundle(rng)
            for method in ("majority", "totprecision", "tagprecision", "precisionrecall", "tagpair"):
                weights = estimate_weights(bundle, gold, method)
                out = vote(bundle, weights)
                for i in range(len(bundle)):
                    for side in ("open", "close"):
                        outputs = [bundle.side(n, i, side) for n in bundle.names]
                        result = out[i].opens if side == "open" else out[i].closes
                        for j in range(len(outputs[0])):
                            values = {o[j] for o in outputs}
                            if len(values) == 1:
                                assert result[j] == values.pop()

    def test_majority_correct_when_most_are_correct(self):
        rng = random.Random(52)
        for _ in range(40):
            bundle, gold = random_bundle(rng)
            truth = gold_streams(gold, bundle.lengths())
            out = vote(bundle, VoteWeights(method="majority"))
            half = len(bundle.names) / 2.0
            for i in range(len(bundle)):
                for side in ("open", "close"):
                    ref = truth[i].opens if side == "open" else truth[i].closes
                    result = out[i].opens if side == "open" else out[i].closes
                    for j in range(len(ref)):
                        agree = sum(
                            bundle.side(n, i, side)[j] == ref[j] for n in bundle.names
                        )
                        if agree > half:
                            assert result[j] == ref[j]

    def test_permutation_invariance(self):
        rng = random.Random(53)
        for _ in range(10):
            bundle, gold = random_bundle(rng, n_classifiers=4)
            for method in ("majority", "totprecision", "tagprecision", "precisionrecall", "tagpair"):
                reference = None
                for order in permutations(bundle.names):
                    permuted = bundle.select(order)
                    out = vote(permuted, estimate_weights(permuted, gold, method))
                    if reference is None:
                        reference = out
                    else:
                        assert out == reference, method

    def test_equal_weight_totprecision_equals_majority(self):
        rng = random.Random(54)
        for _ in range(30):
            bundle, gold = random_bundle(rng)
            accuracy = {
                (n, side): 0.625 for n in bundle.names for side in ("open", "close")
            }
            flat = vote(bundle, VoteWeights(method="totprecision", accuracy=accuracy))
            majority = vote(bundle, VoteWeights(method="majority"))
            assert flat == majority

    def test_weight_scaling_leaves_decisions_unchanged(self):
        rng = random.Random(55)
        for _ in range(20):
            bundle, gold = random_bundle(rng)
            weights = estimate_weights(bundle, gold, "totprecision")
            scaled = VoteWeights(
                method="totprecision",
                accuracy={k: 4.0 * v for k, v in weights.accuracy.items()},
            )
            assert vote(bundle, weights) == vote(bundle, scaled)

    def test_two_classifier_tagpair_is_conditional_argmax(self):
        # At disagreeing words the pair table decides by empirical argmax;
        # agreeing words short-circuit to the shared value.
        rng = random.Random(56)
        for _ in range(20):
            bundle, gold = random_bundle(rng, n_classifiers=2)
            weights = estimate_weights(bundle, gold, "tagpair")
            out = vote(bundle, weights)
            a, b = sorted(bundle.names)
            for i in range(len(bundle)):
                for side in ("open", "close"):
                    result = out[i].opens if side == "open" else out[i].closes
                    for j in range(bundle.lengths()[i]):
                        pair = (bundle.side(a, i, side)[j], bundle.side(b, i, side)[j])
                        if pair[0] == pair[1]:
                            assert result[j] == pair[0]
                        else:
                            p_true, p_false = weights.pair_tables[a, b, side][pair]
                            assert result[j] == (p_true > p_false)


class TestStackedCombiner:
    def test_reproduces_unanimous_input_after_consistent_training(self):
        gold = [frozenset({Span(0, 1)}), frozenset({Span(2, 2)})]
        lengths = [3, 4]
        perfect = [to_brackets(g, n) for g, n in zip(gold, lengths)]
        bundle = StreamBundle({"a": perfect, "b": perfect, "c": perfect})
        for kind in ("memory-based", "decision-tree"):
            stacker = StackedCombiner(kind=kind).fit(bundle, gold)
            assert stacker.predict(bundle) == perfect

    def test_perfect_classifier_dominates_random_peers(self):
        rng = random.Random(57)
        lengths = [8] * 12
        gold = [random_phrase_set(rng, n) for n in lengths]
        perfect = [to_brackets(g, n) for g, n in zip(gold, lengths)]
        noisy = {
            name: [
                BracketStream(
                    [rng.random() < 0.5 for _ in range(n)],
                    [rng.random() < 0.5 for _ in range(n)],
                )
                for n in lengths
            ]
            for name in ("r1", "r2")
        }
        bundle = StreamBundle({"good": perfect, **noisy})
        stacker = StackedCombiner(kind="memory-based").fit(bundle, gold)
        # every stored instance's class equals its first feature, so the
        # exact-match bucket is always unanimous on tuning replay
        assert stacker.predict(bundle) == perfect

    def test_instance_count_is_words_times_sides(self):
        bundle, gold = hand_fixture()
        stacker = StackedCombiner(kind="memory-based").fit(bundle, gold)
        assert stacker.cores_["open"].n_stored_ == 10
        assert stacker.cores_["close"].n_stored_ == 10
        assert len(stacker.cores_) == 2

    def test_pos_feature_requires_corpus(self):
        bundle, gold = hand_fixture()
        with pytest.raises(ValueError):
            StackedCombiner(use_pos=True).fit(bundle, gold)

    def test_pos_feature_round_trip(self):
        sentence = tiny_sentence(
            [(f"w{i}", "NN" if i % 2 else "DT") for i in range(10)]
        )
        corpus = Corpus((sentence,))
        bundle, gold = hand_fixture()
        stacker = StackedCombiner(use_pos=True).fit(bundle, gold, corpus)
        out = stacker.predict(bundle, corpus)
        assert [len(s) for s in out] == [10]

    def test_unfitted_predict_rejected(self):
        bundle, _ = hand_fixture()
        with pytest.raises(RuntimeError):
            StackedCombiner().predict(bundle)

    def test_length_preserved(self):
        rng = random.Random(58)
        bundle, gold = random_bundle(rng)
        stacker = StackedCombiner(kind="decision-tree").fit(bundle, gold)
        assert [len(s) for s in stacker.predict(bundle)] == bundle.lengths()


class TestRanking:
    def test_full_selection_is_identity_permutation(self):
        bundle, gold = hand_fixture()
        ranking = rank_and_select(bundle, gold, 3)
        assert sorted(ranking.names) == ["A", "B", "C"]
        assert ranking.selected == ranking.names

    def test_best_single_classifier(self):
        bundle, gold = hand_fixture()
        ranking = rank_and_select(bundle, gold, 1)
        assert ranking.selected == ("A",)
        assert ranking.scores[0] == 1.0

    def test_five_of_seven_selection(self):
        rng = random.Random(59)
        lengths = [6] * 10
        gold = [random_phrase_set(rng, n) for n in lengths]
        streams = {}
        for c in range(7):
            noise = c / 10.0
            per = []
            for g, n in zip(gold, lengths):
                base = to_brackets(g, n)
                per.append(
                    BracketStream(
                        [v != (rng.random() < noise) for v in base.opens],
                        [v != (rng.random() < noise) for v in base.closes],
                    )
                )
            streams[f"s{c}"] = per
        bundle = StreamBundle(streams)
        ranking = rank_and_select(bundle, gold, 5)
        assert len(ranking.selected) == 5
        scored = dict(rank_classifiers(bundle, gold))
        dropped = set(bundle.names) - set(ranking.selected)
        assert all(
            scored[kept] >= scored[drop]
            for kept in ranking.selected
            for drop in dropped
        )

    def test_ties_break_by_name(self):
        bundle, gold = hand_fixture()
        double = StreamBundle(
            {"zz": bundle.stream("A"), "aa": bundle.stream("A")}
        )
        ranking = rank_and_select(double, gold, 1)
        assert ranking.selected == ("aa",)

    def test_out_of_range_rejected(self):
        bundle, gold = hand_fixture()
        for n in (0, 4):
            with pytest.raises(ValueError):
                rank_and_select(bundle, gold, n)


class TestVotingCombinerEstimator:
    def test_majority_works_unfitted(self):
        bundle, _ = hand_fixture()
        out = VotingCombiner("majority").predict(bundle)
        assert len(out) == 1

    def test_weighted_methods_require_fit(self):
        bundle, _ = hand_fixture()
        with pytest.raises(RuntimeError):
            VotingCombiner("tagpair").predict(bundle)

    def test_fit_predict_phrases_tagpair_recovers_gold(self):
        bundle, gold = hand_fixture()
        combiner = VotingCombiner("tagpair").fit(bundle, gold)
        assert combiner.predict_phrases(bundle) == gold

    def test_precision_recall_hand_derived_outcome(self):
        # Hand computation: at the close of word 5 the perfect classifier
        # votes 1.0 + 1/3 + 1/3 for the bracket while B and C's agreeing
        # no-votes sum to 7/8 + 6/7, so the single-word chunk is lost;
        # everything else follows the perfect classifier.
        bundle, gold = hand_fixture()
        combiner = VotingCombiner("precisionrecall").fit(bundle, gold)
        assert combiner.predict_phrases(bundle) == [
            frozenset({Span(1, 2), Span(8, 9)})
        ]


class TestInternalVotingChunker:
    def test_perfect_members_stay_perfect(self):
        sentences = tuple(
            tiny_sentence([(d, "DT"), (n, "NN"), (v, "VBD")], [(0, 1)])
            for d in ("the", "a")
            for n in ("cat", "dog")
            for v in ("sat", "ran")
        )
        corpus = Corpus(sentences)
        chunker = InternalVotingChunker(KnnChunker(k=1)).fit(corpus)
        assert set(chunker.members_) == {"IOB1", "IOB2", "IOE1", "IOE2", "O+C"}
        assert chunker.predict(corpus) == [s.gold for s in corpus]

    def test_single_voter_identity_via_majority(self):
        # one learner, Majority only: combined equals that learner
        sentences = tuple(
            tiny_sentence([(d, "DT"), (n, "NN")], [(0, 1)])
            for d in ("the", "a")
            for n in ("cat", "dog")
        )
        corpus = Corpus(sentences)
        learner = KnnChunker(k=1).fit(corpus)
        bundle = StreamBundle({"only": learner.predict_streams(corpus)})
        out = VotingCombiner("majority").predict(bundle)
        assert out == learner.predict_streams(corpus)
