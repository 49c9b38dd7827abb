"""Model persistence: save/load must be the identity on predictions."""

import pytest

from npchunk import (
    CascadeChunker,
    InternalVotingChunker,
    KnnChunker,
    MaxEntChunker,
    ObliviousTreeChunker,
    generate_corpus,
    load_model,
    save_model,
)
from npchunk.learners import make_learner, LEARNER_KINDS


@pytest.mark.parametrize("kind", sorted(LEARNER_KINDS))
def test_every_learner_round_trips(kind, tmp_path):
    train = generate_corpus(25, seed=41)
    test = generate_corpus(8, seed=42)
    params = {"iterations": 15} if kind == "maxent" else {}
    model = make_learner(kind, representation="IOB2", **params).fit(train)
    save_model(model, tmp_path / "m.model")
    loaded = load_model(tmp_path / "m.model")
    assert loaded.predict_tags(test) == model.predict_tags(test)
    assert loaded.predict(test) == model.predict(test)


def test_meta_estimators_round_trip(tmp_path):
    train = generate_corpus(25, seed=43)
    test = generate_corpus(8, seed=44)
    for model in (
        CascadeChunker(KnnChunker(representation="IOE1"), folds=3).fit(train),
        InternalVotingChunker(ObliviousTreeChunker()).fit(train),
    ):
        save_model(model, tmp_path / "m.model")
        loaded = load_model(tmp_path / "m.model")
        assert loaded.predict(test) == model.predict(test)


def test_non_model_file_rejected(tmp_path):
    (tmp_path / "junk.model").write_bytes(b"not a model")
    with pytest.raises(Exception):
        load_model(tmp_path / "junk.model")


def test_version_checked(tmp_path):
    import pickle

    payload = {"format": "npchunk-model", "version": 999, "estimator": None}
    with open(tmp_path / "future.model", "wb") as handle:
        pickle.dump(payload, handle)
    with pytest.raises(ValueError, match="version"):
        load_model(tmp_path / "future.model")


def test_maxent_round_trip_uses_history_features(tmp_path):
    train = generate_corpus(25, seed=45)
    test = generate_corpus(8, seed=46)
    model = MaxEntChunker(iterations=15).fit(train)
    save_model(model, tmp_path / "m.model")
    assert load_model(tmp_path / "m.model").predict_tags(test) == model.predict_tags(test)
