"""End-to-end experiment orchestration, driven by a config file.

The pipeline reproduces the full protocol: split the training data into
a training and a tuning part, train every configured learner over its
representations, majority-combine the representation outputs of
learners configured for it, estimate voting weights and train stackers
on the tuning part, combine the test outputs with every configured
method (including best-n subsets ranked on tuning F), and score
everything against the test gold.

Each stage writes its outputs as plain interchange files and later
stages read only files, so a run can be resumed from any stage.  Given
one config and data, two runs produce byte-identical reports: nothing
time- or hash-dependent is ever written.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .chunks import BRACKETS, REPRESENTATIONS, codes_to_stream, pair_brackets, stream_to_codes, tags_to_stream
from .combination import (
    StackedCombiner,
    StreamBundle,
    VOTING_METHODS,
    VotingCombiner,
    combine_internal,
    rank_and_select,
)
from .corpus import (
    SplitSpec,
    read_corpus_file,
    read_tagged_file,
    split_corpus,
    write_corpus_file,
    write_tagged_file,
)
from .evaluation import evaluate, render_report
from .learners import CascadeChunker, LEARNER_KINDS, make_learner

STAGES = ("split", "predict", "combine", "evaluate")

#: Stacking method names and the (kind, use_pos) pair they select.
STACK_METHODS = {
    "stack-mb": ("memory-based", False),
    "stack-mb-pos": ("memory-based", True),
    "stack-dt": ("decision-tree", False),
    "stack-dt-pos": ("decision-tree", True),
}

DEFAULT_METHODS = VOTING_METHODS + tuple(STACK_METHODS)


class ExperimentError(RuntimeError):
    """A pipeline failure, tagged with the stage that raised it."""


@dataclass(frozen=True)
class LearnerConfig:
    name: str
    kind: str
    representations: tuple
    internal: bool = False
    cascade: bool = False
    cascade_params: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentConfig:
    train_path: Path
    test_path: Path
    scheme: str = "IOB1"
    split: SplitSpec = SplitSpec()
    methods: tuple = DEFAULT_METHODS
    top_n: tuple = ()
    seed: int = 0
    learners: tuple = ()

    def __post_init__(self):
        if not self.learners:
            raise ValueError("the learner roster must not be empty")
        for method in self.methods:
            if method not in VOTING_METHODS and method not in STACK_METHODS:
                raise ValueError(f"unknown combination method {method!r}")
        names = [lc.name for lc in self.learners]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate learner names: {names}")


def _parse_value(text: str):
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    for convert in (int, float):
        try:
            return convert(text)
        except ValueError:
            pass
    return text.strip()


def _parse_list(text: str) -> list:
    return [item.strip() for item in text.split(",") if item.strip()]

_CASCADE_KEYS = ("word_context", "pos_context", "tag_window", "folds")
_LEARNER_KEYS = ("kind", "representations", "internal", "cascade") + tuple(
    f"cascade_{k}" for k in _CASCADE_KEYS
)


def _parse_bool(name: str, key: str, text: str) -> bool:
    value = _parse_value(text)
    if not isinstance(value, bool):
        raise ValueError(f"learner {name!r}: {key} must be true or false, got {text!r}")
    return value


def _parse_learner(name: str, section) -> LearnerConfig:
    if "kind" not in section:
        raise ValueError(f"learner {name!r} is missing the 'kind' setting")
    kind = section["kind"].strip()
    if kind not in LEARNER_KINDS:
        raise ValueError(f"learner {name!r} has unknown kind {kind!r}")
    internal = _parse_bool(name, "internal", section.get("internal", "false"))
    cascade = _parse_bool(name, "cascade", section.get("cascade", "false"))
    if internal:
        representations = REPRESENTATIONS
        if "representations" in section:
            configured = tuple(_parse_list(section["representations"]))
            if sorted(configured) != sorted(REPRESENTATIONS):
                raise ValueError(
                    f"learner {name!r} uses internal combination and must run "
                    f"all of {REPRESENTATIONS}"
                )
    else:
        representations = tuple(_parse_list(section.get("representations", "IOB1")))
        if len(representations) != 1:
            raise ValueError(
                f"learner {name!r} has {len(representations)} representations; "
                "without internal combination exactly one is required"
            )
    cascade_params = {}
    params = {}
    for key in section:
        if key in ("kind", "representations", "internal", "cascade"):
            continue
        if key.startswith("cascade_"):
            short = key[len("cascade_"):]
            if short not in _CASCADE_KEYS:
                raise ValueError(f"learner {name!r}: unknown cascade setting {key!r}")
            cascade_params[short] = _parse_value(section[key])
        else:
            params[key] = _parse_value(section[key])
    return LearnerConfig(
        name=name,
        kind=kind,
        representations=representations,
        internal=internal,
        cascade=cascade,
        cascade_params=cascade_params,
        params=params,
    )


def load_config(path) -> ExperimentConfig:
    """Parse an experiment config file (INI syntax, see data/experiment.ini).

    Relative data paths are resolved against the config file's own
    directory, so a config travels with its data.
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as handle:
        parser.read_file(handle)
    if "data" not in parser or "train" not in parser["data"] or "test" not in parser["data"]:
        raise ValueError("config needs a [data] section with 'train' and 'test'")
    base = path.parent

    def data_path(name: str) -> Path:
        p = Path(parser["data"][name])
        return p if p.is_absolute() else base / p

    split_section = parser["split"] if "split" in parser else {}
    split = SplitSpec(
        train_fraction=float(split_section.get("train_fraction", "0.9")),
        mode=split_section.get("mode", "prefix"),
    )
    combo = parser["combination"] if "combination" in parser else {}
    methods = tuple(_parse_list(combo.get("methods", ""))) or DEFAULT_METHODS
    top_n = tuple(int(n) for n in _parse_list(combo.get("top_n", "")))
    seed = int(combo.get("seed", "0"))
    learners = tuple(
        _parse_learner(section[len("learner:"):], parser[section])
        for section in parser.sections()
        if section.startswith("learner:")
    )
    return ExperimentConfig(
        train_path=data_path("train"),
        test_path=data_path("test"),
        scheme=parser["data"].get("scheme", "IOB1"),
        split=split,
        methods=methods,
        top_n=top_n,
        seed=seed,
        learners=learners,
    )


def _read_streams(path) -> list:
    _, codes = read_tagged_file(path)
    return [codes_to_stream(c) for c in codes]


def _stage_split(config: ExperimentConfig, out: Path) -> None:
    corpus = read_corpus_file(config.train_path, config.scheme)
    corpus.gold_phrases()
    train, tune = split_corpus(corpus, config.split, require_both=True)
    (out / "split").mkdir(exist_ok=True)
    write_corpus_file(train, config.scheme, out / "split" / "train.txt")
    write_corpus_file(tune, config.scheme, out / "split" / "tune.txt")


def _stage_predict(config: ExperimentConfig, out: Path) -> None:
    train = read_corpus_file(out / "split" / "train.txt", config.scheme)
    parts = (
        ("tune", read_corpus_file(out / "split" / "tune.txt", config.scheme)),
        ("test", read_corpus_file(config.test_path, config.scheme)),
    )
    (out / "predictions").mkdir(exist_ok=True)
    (out / "streams").mkdir(exist_ok=True)
    for lc in config.learners:
        part_streams = {part: {} for part, _ in parts}
        for rep in lc.representations:
            estimator = make_learner(lc.kind, **lc.params)
            estimator.set_params(representation=rep)
            if lc.cascade and rep != BRACKETS:
                estimator = CascadeChunker(
                    estimator, random_state=config.seed, **lc.cascade_params
                )
            estimator.fit(train)
            for part, corpus in parts:
                tags = estimator.predict_tags(corpus)
                write_tagged_file(
                    corpus, tags, out / "predictions" / f"{lc.name}.{rep}.{part}.txt"
                )
                part_streams[part][rep] = [tags_to_stream(t, rep) for t in tags]
        for part, corpus in parts:
            if lc.internal:
                streams = combine_internal(part_streams[part])
            else:
                streams = part_streams[part][lc.representations[0]]
            write_tagged_file(
                corpus,
                [stream_to_codes(s) for s in streams],
                out / "streams" / f"{lc.name}.{part}.txt",
            )


def _combine_one(method, tune_bundle, tune_gold, test_bundle, tune_corpus, test_corpus):
    if method in STACK_METHODS:
        kind, use_pos = STACK_METHODS[method]
        stacker = StackedCombiner(kind=kind, use_pos=use_pos)
        stacker.fit(tune_bundle, tune_gold, tune_corpus if use_pos else None)
        return stacker.predict(test_bundle, test_corpus if use_pos else None)
    return VotingCombiner(method).fit(tune_bundle, tune_gold).predict(test_bundle)


def _stage_combine(config: ExperimentConfig, out: Path) -> None:
    tune = read_corpus_file(out / "split" / "tune.txt", config.scheme)
    test = read_corpus_file(config.test_path, config.scheme)
    tune_gold = tune.gold_phrases()
    names = [lc.name for lc in config.learners]
    tune_bundle = StreamBundle(
        {n: _read_streams(out / "streams" / f"{n}.tune.txt") for n in names}
    )
    test_bundle = StreamBundle(
        {n: _read_streams(out / "streams" / f"{n}.test.txt") for n in names}
    )
    (out / "combined").mkdir(exist_ok=True)
    for method in config.methods:
        streams = _combine_one(method, tune_bundle, tune_gold, test_bundle, tune, test)
        write_tagged_file(
            test, [stream_to_codes(s) for s in streams], out / "combined" / f"{method}.test.txt"
        )
    ranking = rank_and_select(tune_bundle, tune_gold, n=len(names))
    with open(out / "ranking.txt", "w", encoding="utf-8", newline="\n") as handle:
        for name, score in zip(ranking.names, ranking.scores):
            handle.write(f"{name} {score:.6f}\n")
    for n in config.top_n:
        selected = rank_and_select(tune_bundle, tune_gold, n).selected
        for method in config.methods:
            streams = _combine_one(
                method,
                tune_bundle.select(selected),
                tune_gold,
                test_bundle.select(selected),
                tune,
                test,
            )
            write_tagged_file(
                test,
                [stream_to_codes(s) for s in streams],
                out / "combined" / f"{method}.top{n}.test.txt",
            )


def _score_stream_file(path, gold, lengths):
    streams = _read_streams(path)
    return evaluate([pair_brackets(s) for s in streams], gold, lengths)


def _stage_evaluate(config: ExperimentConfig, out: Path) -> None:
    test = read_corpus_file(config.test_path, config.scheme)
    gold = test.gold_phrases()
    lengths = [len(s) for s in test]
    rows = []
    for lc in config.learners:
        if len(lc.representations) > 1:
            for rep in lc.representations:
                _, tags = read_tagged_file(out / "predictions" / f"{lc.name}.{rep}.test.txt")
                phrases = [pair_brackets(tags_to_stream(t, rep)) for t in tags]
                rows.append((f"{lc.name}.{rep}", evaluate(phrases, gold, lengths)))
        rows.append((lc.name, _score_stream_file(out / "streams" / f"{lc.name}.test.txt", gold, lengths)))
    for method in config.methods:
        rows.append((method, _score_stream_file(out / "combined" / f"{method}.test.txt", gold, lengths)))
    for n in config.top_n:
        for method in config.methods:
            rows.append(
                (
                    f"{method}.top{n}",
                    _score_stream_file(out / "combined" / f"{method}.top{n}.test.txt", gold, lengths),
                )
            )
    header = (
        "npchunk experiment report\n"
        f"train: {config.train_path} (split {config.split.train_fraction} {config.split.mode})\n"
        f"test: {config.test_path} ({len(test)} sentences, {test.token_count()} tokens)\n"
        "note: tuning predictions come from models trained on the training part only\n"
        "\n"
    )
    with open(out / "report.txt", "w", encoding="utf-8", newline="\n") as handle:
        handle.write(header)
        handle.write(render_report(rows))
    with open(out / "report.kv", "w", encoding="utf-8", newline="\n") as handle:
        for name, report in rows:
            handle.write(report.to_kv(prefix=f"{name}."))


_STAGE_FUNCS = {
    "split": _stage_split,
    "predict": _stage_predict,
    "combine": _stage_combine,
    "evaluate": _stage_evaluate,
}


def run_experiment(config: ExperimentConfig, out_dir, stage: str = "split") -> Path:
    """Run the pipeline from ``stage`` onward; returns the report path.

    On failure a FAILED.txt marker naming the stage is left in the
    output directory and an ``ExperimentError`` is raised.
    """
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    marker = out / "FAILED.txt"
    if marker.exists():
        marker.unlink()
    for name in STAGES[STAGES.index(stage):]:
        try:
            _STAGE_FUNCS[name](config, out)
        except Exception as exc:
            marker.write_text(f"stage {name} failed: {exc}\n", encoding="utf-8")
            raise ExperimentError(f"stage {name} failed: {exc}") from exc
    return out / "report.txt"
