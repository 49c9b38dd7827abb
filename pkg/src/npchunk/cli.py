"""Command line interface.

Subcommands expose the library over interchange files: ``run`` drives a
whole configured experiment, and ``train``, ``predict``, ``convert``,
``combine``, ``evaluate`` and ``synth`` each wrap one operation so
pipelines can also be chained by hand, including with tagged files
produced by systems this package never trained.
"""

from __future__ import annotations

import argparse
import sys

from .chunks import REPRESENTATIONS, pair_brackets, stream_to_codes, tags_to_stream
from .combination import VOTING_METHODS, StreamBundle, VotingCombiner, rank_and_select
from .corpus import (
    read_corpus_file,
    read_tagged_file,
    write_corpus_file,
    write_tagged_file,
)
from .evaluation import evaluate_corpus, render_report
from .experiment import STACK_METHODS, STAGES, _combine_one, load_config, run_experiment
from .learners import CascadeChunker, LEARNER_KINDS, load_model, make_learner, save_model
from .synth import generate_corpus


def _parse_setting(text: str) -> tuple:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    key, value = text.split("=", 1)
    lowered = value.strip().lower()
    if lowered in ("true", "false"):
        return key, lowered == "true"
    for convert in (int, float):
        try:
            return key, convert(value)
        except ValueError:
            pass
    return key, value


def _parse_pred(text: str) -> tuple:
    """NAME=PATH[:SCHEME] for combine inputs."""
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH[:SCHEME], got {text!r}")
    name, rest = text.split("=", 1)
    if ":" in rest:
        path, scheme = rest.rsplit(":", 1)
    else:
        path, scheme = rest, "IOB1"
    if scheme not in REPRESENTATIONS:
        raise argparse.ArgumentTypeError(f"unknown scheme {scheme!r} in {text!r}")
    return name, path, scheme


def _load_pred_streams(specs) -> tuple:
    """Read NAME=PATH:SCHEME interchange files into (streams, corpus)."""
    streams = {}
    corpus = None
    for name, path, scheme in specs:
        loaded, tags = read_tagged_file(path)
        streams[name] = [tags_to_stream(t, scheme) for t in tags]
        if corpus is None:
            corpus = loaded
    return streams, corpus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npchunk",
        description="Base noun phrase chunking with ensemble combination.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a configured experiment end to end")
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--stage", default="split", choices=STAGES, help="stage to resume from")

    p = sub.add_parser("train", help="train one learner on one representation")
    p.add_argument("--learner", required=True, choices=sorted(LEARNER_KINDS))
    p.add_argument("--representation", default="IOB1", choices=REPRESENTATIONS)
    p.add_argument("--train", required=True, help="annotated training file")
    p.add_argument("--scheme", default="IOB1", help="gold column scheme of the training file")
    p.add_argument("--model", required=True, help="where to write the model")
    p.add_argument("--set", dest="settings", action="append", default=[],
                   type=_parse_setting, metavar="KEY=VALUE",
                   help="estimator parameter override (repeatable)")
    p.add_argument("--cascade", action="store_true", help="add the second, tag-informed stage")
    p.add_argument("--seed", type=int, default=0, help="fold seed for cascade cross-prediction")

    p = sub.add_parser("predict", help="tag a file with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="file to tag (annotation column optional)")
    p.add_argument("--out", required=True, help="tagged interchange file to write")

    p = sub.add_parser("convert", help="convert a tagged file between representations")
    p.add_argument("--input", required=True)
    p.add_argument("--from", dest="source", required=True, choices=REPRESENTATIONS)
    p.add_argument("--to", dest="target", required=True, choices=REPRESENTATIONS)
    p.add_argument("--out", required=True)

    p = sub.add_parser("combine", help="combine tagged interchange files")
    p.add_argument("--method", required=True, choices=VOTING_METHODS + tuple(STACK_METHODS))
    p.add_argument("--pred", action="append", required=True, type=_parse_pred,
                   metavar="NAME=PATH[:SCHEME]", help="test output of one classifier (repeatable)")
    p.add_argument("--tune-pred", action="append", default=[], type=_parse_pred,
                   metavar="NAME=PATH[:SCHEME]", help="tuning output of the same classifier")
    p.add_argument("--tune-gold", help="annotated tuning file for weight estimation")
    p.add_argument("--gold-scheme", default="IOB1", choices=REPRESENTATIONS)
    p.add_argument("--top", type=int, help="combine only the best N classifiers by tuning F")
    p.add_argument("--out", required=True, help="combined bracket interchange file")

    p = sub.add_parser("evaluate", help="score a prediction file against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--gold-scheme", default="IOB1", choices=REPRESENTATIONS)
    p.add_argument("--pred-scheme", default="IOB1", choices=REPRESENTATIONS)
    p.add_argument("--kv", action="store_true", help="machine-readable output")

    p = sub.add_parser("synth", help="generate a synthetic annotated corpus")
    p.add_argument("--sentences", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    report = run_experiment(config, args.out, stage=args.stage)
    print(f"report written to {report}")
    return 0


def _cmd_train(args) -> int:
    corpus = read_corpus_file(args.train, args.scheme)
    params = dict(args.settings)
    estimator = make_learner(args.learner, representation=args.representation, **params)
    if args.cascade:
        estimator = CascadeChunker(estimator, random_state=args.seed)
    estimator.fit(corpus)
    save_model(estimator, args.model)
    print(f"model written to {args.model}")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    corpus = read_corpus_file(args.input, scheme=None)
    tags = model.predict_tags(corpus)
    write_tagged_file(corpus, tags, args.out)
    print(f"predictions written to {args.out}")
    return 0


def _cmd_convert(args) -> int:
    corpus = read_corpus_file(args.input, args.source)
    write_corpus_file(corpus, args.target, args.out)
    print(f"converted file written to {args.out}")
    return 0


def _cmd_combine(args) -> int:
    test_streams, test_corpus = _load_pred_streams(args.pred)
    test_bundle = StreamBundle(test_streams)
    needs_tuning = args.method != "majority" or args.top is not None
    tune_bundle = tune_corpus = tune_gold = None
    if args.tune_pred or args.tune_gold:
        if not (args.tune_pred and args.tune_gold):
            raise ValueError("--tune-pred and --tune-gold must be given together")
        tune_streams, _ = _load_pred_streams(args.tune_pred)
        tune_bundle = StreamBundle(tune_streams)
        tune_corpus = read_corpus_file(args.tune_gold, args.gold_scheme)
        tune_gold = tune_corpus.gold_phrases()
    elif needs_tuning:
        raise ValueError(f"method {args.method!r} (or --top) needs --tune-pred and --tune-gold")
    if args.top is not None:
        selected = rank_and_select(tune_bundle, tune_gold, args.top).selected
        test_bundle = test_bundle.select(selected)
        tune_bundle = tune_bundle.select(selected)
    if args.method == "majority" and tune_bundle is None:
        streams = VotingCombiner("majority").predict(test_bundle)
    else:
        streams = _combine_one(
            args.method, tune_bundle, tune_gold, test_bundle, tune_corpus, test_corpus
        )
    write_tagged_file(test_corpus, [stream_to_codes(s) for s in streams], args.out)
    print(f"combined output written to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    gold = read_corpus_file(args.gold, args.gold_scheme)
    _, tags = read_tagged_file(args.pred)
    if len(tags) != len(gold):
        raise ValueError(f"{len(tags)} predicted sentences for {len(gold)} gold sentences")
    phrases = [pair_brackets(tags_to_stream(t, args.pred_scheme)) for t in tags]
    report = evaluate_corpus(phrases, gold)
    if args.kv:
        sys.stdout.write(report.to_kv())
    else:
        sys.stdout.write(render_report([("pred", report)]))
    return 0


def _cmd_synth(args) -> int:
    corpus = generate_corpus(args.sentences, seed=args.seed)
    write_corpus_file(corpus, "IOB1", args.out)
    print(f"{len(corpus)} sentences written to {args.out}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "convert": _cmd_convert,
    "combine": _cmd_combine,
    "evaluate": _cmd_evaluate,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"npchunk {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
