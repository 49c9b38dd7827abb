"""Trainable chunk classifiers with a shared fit/predict interface."""

from .base import (
    TaggingChunker,
    build_instances,
    check_corpus,
    check_representation,
    load_model,
    predict_labels,
    save_model,
    training_targets,
)
from .cascade import CascadeChunker, cross_predict_tags, run_cascade
from .decision_tree import DecisionTreeChunker, DecisionTreeClassifier
from .features import BOUNDARY, UNKNOWN, ContextSpec, extract_features
from .infogain import entropy, gain_ratio, information_gain
from .knn import KnnChunker, KnnClassifier
from .maxent import MaxEntChunker, MaxEntClassifier
from .naive_bayes import NaiveBayesChunker, NaiveBayesClassifier
from .oblivious_tree import ObliviousTreeChunker, ObliviousTreeClassifier

#: Registry of learner kinds as used in configs and on the command line.
LEARNER_KINDS = {
    "knn": KnnChunker,
    "oblivious-tree": ObliviousTreeChunker,
    "maxent": MaxEntChunker,
    "decision-tree": DecisionTreeChunker,
    "naive-bayes": NaiveBayesChunker,
}


def make_learner(kind: str, **params):
    """Instantiate a learner by registry name with estimator params."""
    if kind not in LEARNER_KINDS:
        raise ValueError(f"unknown learner kind {kind!r}; expected one of {sorted(LEARNER_KINDS)}")
    return LEARNER_KINDS[kind](**params)


__all__ = [
    "BOUNDARY",
    "UNKNOWN",
    "CascadeChunker",
    "ContextSpec",
    "DecisionTreeChunker",
    "DecisionTreeClassifier",
    "KnnChunker",
    "KnnClassifier",
    "LEARNER_KINDS",
    "MaxEntChunker",
    "MaxEntClassifier",
    "NaiveBayesChunker",
    "NaiveBayesClassifier",
    "ObliviousTreeChunker",
    "ObliviousTreeClassifier",
    "TaggingChunker",
    "build_instances",
    "check_corpus",
    "check_representation",
    "cross_predict_tags",
    "entropy",
    "extract_features",
    "gain_ratio",
    "information_gain",
    "load_model",
    "make_learner",
    "predict_labels",
    "run_cascade",
    "save_model",
    "training_targets",
]
