"""Two-stage cascading and cross-prediction."""

import pytest

from npchunk import (
    CascadeChunker,
    Corpus,
    KnnChunker,
    ObliviousTreeChunker,
    generate_corpus,
    run_cascade,
)
from npchunk.learners.cascade import cross_predict_tags

from conftest import tiny_sentence


def separable_corpus():
    sentences = tuple(
        tiny_sentence([(det, "DT"), (noun, "NN"), (verb, "VBD")], [(0, 1)])
        for det in ("the", "a")
        for noun in ("cat", "dog", "firm")
        for verb in ("sat", "ran")
    )
    return Corpus(sentences)


class TestCrossPrediction:
    def test_folds_partition_the_corpus(self):
        corpus = generate_corpus(23, seed=1)
        tags = cross_predict_tags(KnnChunker(), corpus, folds=5, random_state=0)
        assert len(tags) == len(corpus)
        assert all(t is not None for t in tags)
        assert all(len(t) == len(s) for t, s in zip(tags, corpus))

    def test_deterministic_given_seed(self):
        corpus = generate_corpus(12, seed=2)
        a = cross_predict_tags(KnnChunker(), corpus, folds=3, random_state=7)
        b = cross_predict_tags(KnnChunker(), corpus, folds=3, random_state=7)
        assert a == b

    def test_needs_two_sentences(self):
        corpus = Corpus((tiny_sentence([("a", "DT")], [(0, 0)]),))
        with pytest.raises(ValueError):
            cross_predict_tags(KnnChunker(), corpus, folds=5, random_state=0)


class TestCascadeChunker:
    def test_preserves_perfect_stage_one(self):
        corpus = separable_corpus()
        plain = KnnChunker(representation="IOB2", k=1).fit(corpus)
        assert plain.predict(corpus) == [s.gold for s in corpus]
        cascade = CascadeChunker(KnnChunker(representation="IOB2", k=1)).fit(corpus)
        assert cascade.predict(corpus) == plain.predict(corpus)

    def test_rejects_bracket_representation(self):
        with pytest.raises(ValueError):
            CascadeChunker(KnnChunker(representation="O+C")).fit(separable_corpus())

    def test_stage_two_uses_stage_tags(self):
        cascade = CascadeChunker(ObliviousTreeChunker(), tag_window=2).fit(separable_corpus())
        assert cascade.spec_.stage_window == 2
        names = cascade.spec_.slot_names()
        assert "s[+0]" in names and "s[-2]" in names and "s[+2]" in names

    def test_output_matches_representation(self):
        corpus = generate_corpus(20, seed=3)
        cascade = CascadeChunker(KnnChunker(representation="IOE2")).fit(corpus)
        tags = cascade.predict_tags(corpus)
        assert all(t in ("I", "O", "E") for sent in tags for t in sent)


class TestRunCascade:
    def test_disabled_equals_stage_one(self):
        corpus = separable_corpus()
        tags = run_cascade(KnnChunker(), corpus, corpus, scheme="IOB1", enabled=False)
        plain = KnnChunker(representation="IOB1").fit(corpus).predict_tags(corpus)
        assert tags == plain

    def test_enabled_produces_full_sentences(self):
        corpus = generate_corpus(15, seed=4)
        tags = run_cascade(KnnChunker(), corpus, corpus, scheme="IOB2", folds=3)
        assert [len(t) for t in tags] == [len(s) for s in corpus]
