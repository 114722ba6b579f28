"""End-to-end runs: corpora in, ranked change scores and reports out.

Stages: ingest -> match -> extract -> denoise -> divergence -> aggregate
-> rank -> classify -> (evaluate). Extraction results can be saved as
profile JSON so the cheap analysis stages can be rerun with other settings.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import __version__
from .aggregate import (
    LemmaScore,
    RankedList,
    aggregate_lemma_score,
    classify_changepoint,
    classify_percentile,
    rank_lemmas,
)
from .conllu import ConlluParseError, Sentence, read_corpus, validate_sentence
from .divergence import SlotChange, slot_change
from .evaluate import EvaluationError, UndefinedCorrelation, accuracy, load_binary, load_graded, spearman
from .slots import SlotProfile, build_profiles
from .targets import NormalizationRules, TargetError, TargetSpec, load_spelling_map, load_targets
from .transform import FILTER_FIRST, ProfilePair, denoise

logger = logging.getLogger(__name__)

REPORT_FORMAT = "depchange-report/1"
DECIMALS = 6

# execution settings that must not influence any output
_NOT_RECORDED = ("workers", "output_dir")


class PipelineError(Exception):
    """A failure attributed to one pipeline stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.message = message


@dataclass
class RunConfig:
    corpus1: str | None = None
    corpus2: str | None = None
    targets: str | None = None
    targets_format: str = "semeval"
    spelling_map: str | None = None
    mode: str = "se"
    keep_pos: bool = False
    min_total: int = 2
    transform_order: str = FILTER_FIRST
    slot_threshold: float = 0.5
    inclusive_threshold: bool = False
    classify: str = "percentile"
    fraction: float = 0.43
    rounding: str = "half-up"
    gold_binary: str | None = None
    gold_graded: str | None = None
    exclude_deprels: tuple[str, ...] = ()
    case_sensitive: bool = False
    strict: bool = False
    output_dir: str | None = None
    workers: int = 1

    def validate(self) -> None:
        if self.min_total < 1:
            raise ValueError("min_total must be >= 1")
        if not 0.0 <= self.slot_threshold <= 1.0:
            raise ValueError("slot_threshold must lie in [0, 1]")
        if not 0.0 < self.fraction < 1.0:
            raise ValueError("fraction must lie strictly between 0 and 1")
        if self.classify not in ("percentile", "changepoint"):
            raise ValueError(f"unknown classify method {self.classify!r}")
        if self.mode not in ("se", "sz"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def recorded(self) -> dict:
        d = dataclasses.asdict(self)
        for key in _NOT_RECORDED:
            d.pop(key)
        d["exclude_deprels"] = sorted(d["exclude_deprels"])
        return d

    def rules(self) -> NormalizationRules:
        mapping = load_spelling_map(self.spelling_map) if self.spelling_map else {}
        return NormalizationRules.preset(self.mode, mapping, case_sensitive=self.case_sensitive)


@dataclass
class TargetResult:
    target_id: str
    lemma_score: LemmaScore
    pair: ProfilePair
    rank: int = 0
    label: int = 0

    @property
    def score(self) -> float:
        return round(self.lemma_score.score, DECIMALS)


@dataclass
class RunReport:
    config: dict
    results: list[TargetResult]
    ranked: RankedList
    labels: dict[str, int]
    split_index: int | None = None
    evaluation: dict[str, float] | None = None
    parse_errors: list[str] = field(default_factory=list)

    def result(self, target_id: str) -> TargetResult:
        for r in self.results:
            if r.target_id == target_id:
                return r
        raise KeyError(f"unknown target {target_id!r}; available: {sorted(r.target_id for r in self.results)}")

    def scores(self) -> dict[str, float]:
        return {r.target_id: r.score for r in self.results}

    def to_json(self) -> dict:
        cls = {
            "method": self.config["classify"],
            "fraction": self.config["fraction"],
            "positives": sum(self.labels.values()),
            "split_index": self.split_index,
        }
        return {
            "format": REPORT_FORMAT,
            "version": __version__,
            "config": self.config,
            "classification": cls,
            "evaluation": self.evaluation,
            "parse_errors": list(self.parse_errors),
            "targets": [_target_json(r) for r in sorted(self.results, key=lambda r: r.rank)],
        }


def _r(x: float) -> float:
    return round(x, DECIMALS)


def _slot_json(c: SlotChange) -> dict:
    return {
        "slot": c.slot,
        "jsd": _r(c.jsd),
        "support_1": c.support_1,
        "support_2": c.support_2,
        "fillers": [
            {
                "filler": f.filler,
                "count_1": f.count_1,
                "count_2": f.count_2,
                "prob_1": _r(f.prob_1),
                "prob_2": _r(f.prob_2),
                "contribution": _r(f.contribution),
                "direction": f.direction,
            }
            for f in c.contributions
        ],
    }


def _target_json(r: TargetResult) -> dict:
    ls = r.lemma_score
    return {
        "target_id": r.target_id,
        "rank": r.rank,
        "score": r.score,
        "label": r.label,
        "occurrences_1": r.pair.p1.occurrences,
        "occurrences_2": r.pair.p2.occurrences,
        "slots_total": ls.slots_total,
        "slots_used": list(ls.slots_used),
        "slots": [_slot_json(c) for c in ls.all_slots],
    }


# -- ingestion ---------------------------------------------------------------

def iter_valid(
    sentences: Iterable[Sentence], strict: bool, errors: list[str] | None = None
) -> Iterator[Sentence]:
    """Drop (or, in strict mode, reject) structurally invalid sentences."""
    for n, s in enumerate(sentences, start=1):
        problems = validate_sentence(s)
        if not problems:
            yield s
            continue
        where = s.source_id or f"sentence #{n}"
        msg = f"{where}: {'; '.join(problems)}"
        if strict:
            raise ConlluParseError(msg, 0, s.source_id)
        logger.warning("skipping invalid sentence %s", msg)
        if errors is not None:
            errors.append(msg)


def extract_corpus(
    path: str,
    specs: list[TargetSpec],
    rules: NormalizationRules,
    period: int,
    *,
    strict: bool = False,
    exclude_deprels: Sequence[str] = (),
    workers: int = 1,
    errors: list[str] | None = None,
) -> dict[str, SlotProfile]:
    """Profiles for every target over one corpus file, POS kept on fillers."""
    parse_errors: list[ConlluParseError] = []
    try:
        sentences = iter_valid(read_corpus(path, strict=strict, errors=parse_errors), strict, errors)
        profiles = build_profiles(
            sentences, specs, rules, keep_pos=True, period=period,
            exclude_deprels=exclude_deprels, workers=workers,
        )
    except (OSError, ConlluParseError, UnicodeDecodeError) as exc:
        raise PipelineError("ingest", f"{path}: {exc}") from exc
    if errors is not None:
        errors.extend(f"{path}: {e}" for e in parse_errors)
    return profiles


# -- analysis ----------------------------------------------------------------

def score_pair(pair: ProfilePair, threshold: float, inclusive: bool) -> LemmaScore:
    changes = [
        slot_change(slot, pair.p1.counts.get(slot, {}), pair.p2.counts.get(slot, {}))
        for slot in pair.slots()
    ]
    return aggregate_lemma_score(changes, threshold, inclusive, target_id=pair.target_id)


def analyze_profiles(
    profiles_1: dict[str, SlotProfile],
    profiles_2: dict[str, SlotProfile],
    config: RunConfig,
    target_ids: Sequence[str] | None = None,
    parse_errors: Sequence[str] = (),
) -> RunReport:
    """Denoise, score, rank and classify already-extracted profiles."""
    config.validate()
    if target_ids is None:
        target_ids = sorted(set(profiles_1) | set(profiles_2))
    if not target_ids:
        raise PipelineError("aggregate", "no targets to rank")

    results = []
    for tid in target_ids:
        p1 = profiles_1.get(tid) or SlotProfile(tid, 1, {}, 0, True)
        p2 = profiles_2.get(tid) or SlotProfile(tid, 2, {}, 0, True)
        try:
            pair = denoise(
                ProfilePair(tid, p1, p2), config.min_total,
                remove_pos=not config.keep_pos, order=config.transform_order,
            )
        except ValueError as exc:
            raise PipelineError("transform", f"{tid}: {exc}") from exc
        ls = score_pair(pair, config.slot_threshold, config.inclusive_threshold)
        results.append(TargetResult(tid, ls, pair))

    # rank on the serialized precision so the scores TSV reproduces the labels
    rounded = [dataclasses.replace(r.lemma_score, score=r.score) for r in results]
    ranked = rank_lemmas(rounded)
    split_index = None
    if config.classify == "percentile":
        labels = classify_percentile(ranked, config.fraction, config.rounding)
    else:
        try:
            split_index, labels = classify_changepoint(rounded)
        except ValueError as exc:
            raise PipelineError("classify", str(exc)) from exc
    ranks = {e.target_id: e.rank for e in ranked.entries}
    for r in results:
        r.rank, r.label = ranks[r.target_id], labels[r.target_id]

    report = RunReport(config.recorded(), results, ranked, labels, split_index,
                       parse_errors=list(parse_errors))
    report.evaluation = evaluate_report(report, config)
    return report


def evaluate_report(report: RunReport, config: RunConfig) -> dict[str, float] | None:
    if not (config.gold_graded or config.gold_binary):
        return None
    out = {}
    try:
        if config.gold_graded:
            try:
                out["spearman"] = spearman(report.scores(), load_graded(config.gold_graded))
            except UndefinedCorrelation as exc:
                logger.warning("spearman not reported: %s", exc)
                out["spearman"] = None
        if config.gold_binary:
            out["accuracy"] = accuracy(report.labels, load_binary(config.gold_binary))
    except (OSError, EvaluationError) as exc:
        raise PipelineError("evaluate", str(exc)) from exc
    return {k: None if v is None else _r(v) for k, v in out.items()}


def load_run_targets(config: RunConfig) -> tuple[list[TargetSpec], NormalizationRules]:
    try:
        specs = load_targets(config.targets, config.targets_format)
        rules = config.rules()
        rules.check_targets(specs)
    except (OSError, TargetError) as exc:
        raise PipelineError("targets", str(exc)) from exc
    return specs, rules


def run_pipeline(config: RunConfig) -> RunReport:
    """Run every stage; write outputs when ``config.output_dir`` is set."""
    try:
        config.validate()
    except ValueError as exc:
        raise PipelineError("config", str(exc)) from exc
    specs, rules = load_run_targets(config)
    errors: list[str] = []
    profiles = [
        extract_corpus(
            path, specs, rules, period, strict=config.strict,
            exclude_deprels=config.exclude_deprels, workers=config.workers, errors=errors,
        )
        for period, path in ((1, config.corpus1), (2, config.corpus2))
    ]
    report = analyze_profiles(profiles[0], profiles[1], config, [s.id for s in specs], errors)
    if config.output_dir:
        inputs = [config.corpus1, config.corpus2, config.targets, config.spelling_map,
                  config.gold_binary, config.gold_graded]
        write_outputs(report, config.output_dir, [p for p in inputs if p])
    return report


# -- output ------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.{DECIMALS}f}"


def scores_tsv(report: RunReport) -> str:
    return "".join(f"{e.target_id}\t{_fmt(e.score)}\n" for e in report.ranked.entries)


def labels_tsv(report: RunReport) -> str:
    return "".join(f"{e.target_id}\t{report.labels[e.target_id]}\n" for e in report.ranked.entries)


def report_schema() -> dict:
    """JSON Schema that every ``report.json`` validates against."""
    text = (resources.files("depchange") / "schema" / "report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def dump_json(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=1, sort_keys=True) + "\n"


def sha256(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_outputs(report: RunReport, output_dir: str | os.PathLike, inputs: Sequence[str]) -> dict[str, Path]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "scores.tsv": scores_tsv(report),
        "labels.tsv": labels_tsv(report),
        "report.json": dump_json(report.to_json()),
    }
    paths = {}
    for name, text in files.items():
        paths[name] = out / name
        paths[name].write_text(text, encoding="utf-8")
    manifest = {
        "version": __version__,
        "config": report.config,
        "inputs": {str(p): sha256(p) for p in inputs},
        "outputs": {name: sha256(paths[name]) for name in files},
    }
    paths["manifest.json"] = out / "manifest.json"
    paths["manifest.json"].write_text(dump_json(manifest), encoding="utf-8")
    return paths


# -- inspection --------------------------------------------------------------

def _doc(report) -> dict:
    return report.to_json() if isinstance(report, RunReport) else report


def _target_doc(doc: dict, target_id: str) -> dict:
    for t in doc["targets"]:
        if t["target_id"] == target_id:
            return t
    raise KeyError(f"unknown target {target_id!r}; available: {sorted(t['target_id'] for t in doc['targets'])}")


def emit_slot_detail(report, target_id: str, slot: str) -> str:
    """Per-filler contribution table for one slot, largest contribution first."""
    t = _target_doc(_doc(report), target_id)
    slots = {s["slot"]: s for s in t["slots"]}
    if slot not in slots:
        raise KeyError(f"unknown slot {slot!r} for {target_id!r}; available: {sorted(slots)}")
    rows = sorted(slots[slot]["fillers"], key=lambda f: (-f["contribution"], f["filler"]))
    lines = ["filler\tcount_p1\tcount_p2\tprob_p1\tprob_p2\tcontribution\tdirection"]
    for f in rows:
        lines.append(
            f"{f['filler']}\t{f['count_1']}\t{f['count_2']}\t{_fmt(f['prob_1'])}\t"
            f"{_fmt(f['prob_2'])}\t{_fmt(f['contribution'])}\t{f['direction']}"
        )
    return "\n".join(lines) + "\n"


def emit_frequency_series(report, target_id: str, slot: str, fillers: Sequence[str] = ()) -> str:
    """Relative frequency of selected fillers in both periods.

    With no ``fillers`` given, every filler of the slot is listed. Fillers
    not attested in the slot get zeros.
    """
    t = _target_doc(_doc(report), target_id)
    known = {}
    for s in t["slots"]:
        if s["slot"] == slot:
            known = {f["filler"]: f for f in s["fillers"]}
    names = list(fillers) if fillers else sorted(known)
    lines = ["filler\trelative_freq_p1\trelative_freq_p2"]
    for name in names:
        f = known.get(name)
        p1, p2 = (f["prob_1"], f["prob_2"]) if f else (0.0, 0.0)
        lines.append(f"{name}\t{_fmt(p1)}\t{_fmt(p2)}")
    return "\n".join(lines) + "\n"
