"""Command-line interface.

Subcommands::

    depchange run       corpora + targets -> scores.tsv, labels.tsv, report.json, manifest.json
    depchange extract   one corpus -> profile JSON
    depchange analyze   two profile JSON files -> same outputs as ``run``
    depchange evaluate  scores/labels TSV + gold TSV -> metrics
    depchange inspect   report.json -> per-filler slot table or frequency series
    depchange synth     write a synthetic corpus with planted change
    depchange demo      run on the bundled demo corpora

Exit status: 0 success, 1 usage error, 2 data error. Log verbosity comes
from ``DEPCHANGE_LOG_LEVEL`` (default WARNING).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

from .conllu import ConlluParseError
from .evaluate import EvaluationError, accuracy, load_binary, load_graded, read_tsv, spearman
from .pipeline import (
    PipelineError,
    RunConfig,
    analyze_profiles,
    dump_json,
    emit_frequency_series,
    emit_slot_detail,
    extract_corpus,
    load_run_targets,
    run_pipeline,
    write_outputs,
)
from .slots import load_profiles, save_profiles
from .synth import SynthSpec, generate
from .targets import TargetError, load_targets

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _target_args(p):
    p.add_argument("--targets", required=True, help="target list, one per line")
    p.add_argument("--targets-format", choices=["semeval", "plain"], default="semeval")
    p.add_argument("--spelling-map", help="TSV of variant<TAB>canonical lemma")
    p.add_argument("--mode", choices=["se", "sz"], default="se",
                   help="se: POS-neutral target matching; sz: PROPN counted as NOUN")
    p.add_argument("--case-sensitive", action="store_true")
    p.add_argument("--exclude-deprel", action="append", default=[], metavar="REL",
                   help="ignore edges with this relation (repeatable)")
    p.add_argument("--strict", action="store_true", help="abort on malformed sentences")
    p.add_argument("--workers", type=int, default=1)


def _analysis_args(p):
    pos = p.add_mutually_exclusive_group()
    pos.add_argument("--keep-pos", dest="keep_pos", action="store_true")
    pos.add_argument("--no-pos", dest="keep_pos", action="store_false")
    p.set_defaults(keep_pos=False)
    p.add_argument("--min-total", type=int, default=2,
                   help="drop fillers seen fewer times across both periods (1 disables)")
    p.add_argument("--transform-order", choices=["filter-first", "strip-first"], default="filter-first")
    p.add_argument("--slot-threshold", type=float, default=0.5)
    p.add_argument("--inclusive-threshold", action="store_true",
                   help="count slots with jsd equal to the threshold")
    p.add_argument("--classify", choices=["percentile", "changepoint"], default="percentile")
    p.add_argument("--fraction", type=float, default=0.43)
    p.add_argument("--rounding", choices=["half-up", "half-even"], default="half-up")
    p.add_argument("--gold-binary")
    p.add_argument("--gold-graded")
    p.add_argument("--output-dir", "-o")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="depchange", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="full pipeline over two corpora")
    p.add_argument("--corpus1", required=True)
    p.add_argument("--corpus2", required=True)
    _target_args(p)
    _analysis_args(p)

    p = sub.add_parser("extract", help="slot profiles for one corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--period", type=int, choices=[1, 2], required=True)
    _target_args(p)
    p.add_argument("--output", "-o", required=True, help="profile JSON to write")

    p = sub.add_parser("analyze", help="score two profile files")
    p.add_argument("--profiles1", required=True)
    p.add_argument("--profiles2", required=True)
    p.add_argument("--targets", help="target list fixing the set and order of targets")
    p.add_argument("--targets-format", choices=["semeval", "plain"], default="semeval")
    _analysis_args(p)

    p = sub.add_parser("evaluate", help="compare predictions with gold files")
    p.add_argument("--scores")
    p.add_argument("--labels")
    p.add_argument("--gold-graded")
    p.add_argument("--gold-binary")

    p = sub.add_parser("inspect", help="slot detail from a report.json")
    p.add_argument("--report", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--slot", required=True)
    p.add_argument("--series", action="store_true",
                   help="relative frequencies per period instead of contributions")
    p.add_argument("--fillers", default="", help="comma-separated fillers for --series")
    p.add_argument("--output", "-o")

    p = sub.add_parser("synth", help="generate a synthetic corpus with planted change")
    p.add_argument("--stable", type=int, default=10)
    p.add_argument("--changed", type=int, default=10)
    p.add_argument("--sentences", type=int, default=100, help="per target per period")
    p.add_argument("--vocab", type=int, default=10)
    p.add_argument("--overlap", type=float, default=0.2)
    p.add_argument("--singletons", type=int, default=0)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--output-dir", "-o", required=True)

    p = sub.add_parser("demo", help="run on the bundled demo corpora")
    p.add_argument("--output-dir", "-o", required=True)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    for f in cfg.__dataclass_fields__:
        if f == "exclude_deprels":
            cfg.exclude_deprels = tuple(getattr(args, "exclude_deprel", ()) or ())
        elif hasattr(args, f):
            setattr(cfg, f, getattr(args, f))
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.workers < 1:
        raise UsageError("--workers must be >= 1")
    return cfg


def _summary(report) -> str:
    lines = [f"{e.rank}\t{e.target_id}\t{e.score:.6f}\t{report.labels[e.target_id]}"
             for e in report.ranked.entries]
    if report.evaluation:
        lines += [f"# {k} = {'undefined' if v is None else f'{v:.6f}'}"
                  for k, v in sorted(report.evaluation.items())]
    return "\n".join(lines) + "\n"


def cmd_run(args) -> int:
    report = run_pipeline(config_from_args(args))
    sys.stdout.write(_summary(report))
    return 0


def cmd_extract(args) -> int:
    cfg = config_from_args(args)
    specs, rules = load_run_targets(cfg)
    profiles = extract_corpus(
        args.corpus, specs, rules, args.period, strict=cfg.strict,
        exclude_deprels=cfg.exclude_deprels, workers=cfg.workers,
    )
    save_profiles(profiles.values(), args.output)
    return 0


def cmd_analyze(args) -> int:
    cfg = config_from_args(args)
    try:
        p1, p2 = load_profiles(args.profiles1), load_profiles(args.profiles2)
        ids = [s.id for s in load_targets(args.targets, args.targets_format)] if args.targets else None
    except (OSError, ValueError, KeyError) as exc:
        raise PipelineError("ingest", str(exc)) from exc
    report = analyze_profiles(p1, p2, cfg, ids)
    if cfg.output_dir:
        inputs = [args.profiles1, args.profiles2, args.targets, cfg.gold_binary, cfg.gold_graded]
        write_outputs(report, cfg.output_dir, [p for p in inputs if p])
    sys.stdout.write(_summary(report))
    return 0


def cmd_evaluate(args) -> int:
    if not ((args.scores and args.gold_graded) or (args.labels and args.gold_binary)):
        raise UsageError("need --scores with --gold-graded and/or --labels with --gold-binary")
    out = {}
    if args.scores and args.gold_graded:
        pred = {k: float(v) for k, v in read_tsv(args.scores).items()}
        out["spearman"] = round(spearman(pred, load_graded(args.gold_graded)), 6)
    if args.labels and args.gold_binary:
        out["accuracy"] = round(accuracy(load_binary(args.labels), load_binary(args.gold_binary)), 6)
    sys.stdout.write(dump_json(out))
    return 0


def cmd_inspect(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        doc = json.load(fh)
    if args.series:
        fillers = [f for f in args.fillers.split(",") if f]
        text = emit_frequency_series(doc, args.target, args.slot, fillers)
    else:
        text = emit_slot_detail(doc, args.target, args.slot)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(args) -> int:
    try:
        spec = SynthSpec(args.stable, args.changed, args.sentences, args.vocab,
                         args.overlap, args.seed, args.singletons)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    paths = generate(spec).write(args.output_dir)
    for key, path in paths.items():
        print(f"{key}\t{path}")
    return 0


def demo_paths() -> dict[str, str]:
    base = resources.files("depchange") / "data" / "demo"
    return {
        "corpus1": str(base / "period1.conllu"),
        "corpus2": str(base / "period2.conllu"),
        "targets": str(base / "targets.txt"),
        "gold_graded": str(base / "graded.tsv"),
        "gold_binary": str(base / "binary.tsv"),
    }


def cmd_demo(args) -> int:
    cfg = RunConfig(**demo_paths(), output_dir=args.output_dir)
    report = run_pipeline(cfg)
    sys.stdout.write(_summary(report))
    return 0


COMMANDS = {
    "run": cmd_run,
    "extract": cmd_extract,
    "analyze": cmd_analyze,
    "evaluate": cmd_evaluate,
    "inspect": cmd_inspect,
    "synth": cmd_synth,
    "demo": cmd_demo,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("DEPCHANGE_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"depchange: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PipelineError as exc:
        print(f"depchange: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError, ConlluParseError, TargetError, EvaluationError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"depchange: error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
