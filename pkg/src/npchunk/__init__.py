"""Base noun phrase chunking with ensemble combination.

The package trains several desk-scale chunk classifiers, lets one
learner vote across five output representations, combines different
classifiers' outputs by weighted voting or stacking, and scores
everything with phrase precision, recall and F.
"""

from .chunks import (
    BRACKET_CODES,
    BRACKETS,
    BracketStream,
    REPRESENTATIONS,
    Span,
    TagScheme,
    check_spans,
    codes_to_stream,
    convert,
    decode,
    encode,
    pair_brackets,
    stream_to_codes,
    tags_to_stream,
    to_brackets,
)
from .combination import (
    InternalVotingChunker,
    Ranking,
    STACKING_KINDS,
    StackedCombiner,
    StreamBundle,
    VOTING_METHODS,
    VoteWeights,
    VotingCombiner,
    combine_internal,
    estimate_weights,
    gold_streams,
    majority_streams,
    rank_and_select,
    rank_classifiers,
    vote,
)
from .corpus import (
    Corpus,
    FormatError,
    Sentence,
    SplitSpec,
    Token,
    read_corpus,
    read_corpus_file,
    read_tagged,
    read_tagged_file,
    split_corpus,
    write_corpus,
    write_corpus_file,
    write_tagged,
    write_tagged_file,
)
from .evaluation import EvalReport, evaluate, evaluate_corpus, f_beta, render_report
from .experiment import (
    ExperimentConfig,
    ExperimentError,
    LearnerConfig,
    STAGES,
    load_config,
    run_experiment,
)
from .learners import (
    CascadeChunker,
    ContextSpec,
    DecisionTreeChunker,
    KnnChunker,
    LEARNER_KINDS,
    MaxEntChunker,
    NaiveBayesChunker,
    ObliviousTreeChunker,
    extract_features,
    load_model,
    make_learner,
    run_cascade,
    save_model,
)
from .synth import generate_corpus

__version__ = "0.1.0"

__all__ = [
    "BRACKETS",
    "BRACKET_CODES",
    "BracketStream",
    "CascadeChunker",
    "ContextSpec",
    "Corpus",
    "DecisionTreeChunker",
    "EvalReport",
    "ExperimentConfig",
    "ExperimentError",
    "FormatError",
    "InternalVotingChunker",
    "KnnChunker",
    "LEARNER_KINDS",
    "LearnerConfig",
    "MaxEntChunker",
    "NaiveBayesChunker",
    "ObliviousTreeChunker",
    "REPRESENTATIONS",
    "Ranking",
    "STACKING_KINDS",
    "STAGES",
    "Sentence",
    "Span",
    "SplitSpec",
    "StackedCombiner",
    "StreamBundle",
    "TagScheme",
    "Token",
    "VOTING_METHODS",
    "VoteWeights",
    "VotingCombiner",
    "check_spans",
    "codes_to_stream",
    "combine_internal",
    "convert",
    "decode",
    "encode",
    "estimate_weights",
    "evaluate",
    "evaluate_corpus",
    "extract_features",
    "f_beta",
    "generate_corpus",
    "gold_streams",
    "load_config",
    "load_model",
    "majority_streams",
    "make_learner",
    "pair_brackets",
    "rank_and_select",
    "rank_classifiers",
    "read_corpus",
    "read_corpus_file",
    "read_tagged",
    "read_tagged_file",
    "render_report",
    "run_cascade",
    "run_experiment",
    "save_model",
    "split_corpus",
    "stream_to_codes",
    "tags_to_stream",
    "to_brackets",
    "vote",
    "write_corpus",
    "write_corpus_file",
    "write_tagged",
    "write_tagged_file",
]
