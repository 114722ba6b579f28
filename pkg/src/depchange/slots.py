"""Dependency slots around target tokens and their per-period filler counts.

A slot is a dependency relation seen from the target's side:

* ``chi_<deprel>``: the filler depends on the target (``filler.head == target``)
* ``pa_<deprel>``: the target depends on the filler (``target.head == filler``)

Relation subtypes are kept verbatim (``chi_nsubj:pass`` is its own slot).
"""

from __future__ import annotations

import json
import os
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, Iterator

from .conllu import Sentence, Token
from .targets import NormalizationRules, TargetSpec, fold, normalize_token

CHILD = "chi_"
PARENT = "pa_"


@dataclass(frozen=True)
class SlotObservation:
    slot: str
    filler: str
    sentence_ref: str | None = None


@dataclass
class SlotProfile:
    """Filler counts per slot for one target in one period."""

    target_id: str
    period: int
    counts: dict[str, dict[str, int]] = field(default_factory=dict)
    occurrences: int = 0
    pos_tagged: bool = True

    def add(self, slot: str, filler: str, n: int = 1) -> None:
        table = self.counts.setdefault(slot, {})
        table[filler] = table.get(filler, 0) + n

    def merge(self, other: "SlotProfile") -> "SlotProfile":
        """Sum two profiles of the same target and period into a new one."""
        if (other.target_id, other.period) != (self.target_id, self.period):
            raise ValueError("cannot merge profiles of different targets or periods")
        out = SlotProfile(self.target_id, self.period, {}, 0, self.pos_tagged and other.pos_tagged)
        for prof in (self, other):
            out.occurrences += prof.occurrences
            for slot, table in prof.counts.items():
                for filler, n in table.items():
                    out.add(slot, filler, n)
        return out

    def copy(self) -> "SlotProfile":
        return SlotProfile(
            self.target_id,
            self.period,
            {slot: dict(table) for slot, table in self.counts.items()},
            self.occurrences,
            self.pos_tagged,
        )

    def to_json(self) -> dict:
        return {
            "target_id": self.target_id,
            "period": self.period,
            "occurrences": self.occurrences,
            "pos_tagged": self.pos_tagged,
            "counts": {
                slot: {f: self.counts[slot][f] for f in sorted(self.counts[slot])}
                for slot in sorted(self.counts)
            },
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SlotProfile":
        return cls(
            target_id=doc["target_id"],
            period=int(doc["period"]),
            counts={s: {f: int(n) for f, n in t.items()} for s, t in doc["counts"].items()},
            occurrences=int(doc["occurrences"]),
            pos_tagged=bool(doc.get("pos_tagged", True)),
        )


def filler_key(tok: Token, keep_pos: bool) -> str:
    return f"{tok.lemma}/{tok.upos}" if keep_pos else tok.lemma


class _Matcher:
    """Index of target specs by folded lemma, for one pass over a corpus."""

    def __init__(self, specs: list[TargetSpec], rules: NormalizationRules):
        self.rules = rules
        self.by_lemma: dict[str, list[TargetSpec]] = defaultdict(list)
        for spec in specs:
            self.by_lemma[fold(spec.lemma, rules.case_sensitive)].append(spec)

    def specs_for(self, tok: Token) -> list[TargetSpec]:
        candidates = self.by_lemma.get(fold(tok.lemma, self.rules.case_sensitive), ())
        return [
            s for s in candidates
            if not s.pos_filter or self.rules.tar_mode or tok.upos in s.pos_filter
        ]


def _observe(
    sentence: Sentence,
    matcher: _Matcher,
    keep_pos: bool,
    exclude_deprels: frozenset[str],
) -> Iterator[tuple[TargetSpec, Token, list[SlotObservation]]]:
    tokens = [normalize_token(t, matcher.rules) for t in sentence.tokens]
    children: dict[int, list[Token]] = defaultdict(list)
    for t in tokens:
        if t.head:
            children[t.head].append(t)
    for t in tokens:
        specs = matcher.specs_for(t)
        if not specs:
            continue
        obs = [
            SlotObservation(CHILD + c.deprel, filler_key(c, keep_pos), sentence.source_id)
            for c in children.get(t.index, ())
            if c.deprel not in exclude_deprels
        ]
        if t.head and t.deprel not in exclude_deprels:
            head = tokens[t.head - 1]
            obs.append(SlotObservation(PARENT + t.deprel, filler_key(head, keep_pos), sentence.source_id))
        for spec in specs:
            yield spec, t, obs


def extract_slots(
    s: Sentence,
    spec: TargetSpec,
    rules: NormalizationRules,
    keep_pos: bool = True,
    exclude_deprels: Iterable[str] = (),
) -> list[SlotObservation]:
    """All slot observations for occurrences of ``spec`` in ``s``."""
    matcher = _Matcher([spec], rules)
    out: list[SlotObservation] = []
    for _, _, obs in _observe(s, matcher, keep_pos, frozenset(exclude_deprels)):
        out.extend(obs)
    return out


def _count(sentences, specs, rules, keep_pos, exclude_deprels):
    matcher = _Matcher(specs, rules)
    occurrences: Counter = Counter()
    counts: dict[str, Counter] = defaultdict(Counter)
    for sent in sentences:
        for spec, _, obs in _observe(sent, matcher, keep_pos, exclude_deprels):
            occurrences[spec.id] += 1
            table = counts[spec.id]
            for o in obs:
                table[(o.slot, o.filler)] += 1
    return occurrences, counts


def _chunks(it: Iterable, size: int) -> Iterator[list]:
    it = iter(it)
    while chunk := list(islice(it, size)):
        yield chunk


def build_profiles(
    corpus: Iterable[Sentence],
    specs: list[TargetSpec],
    rules: NormalizationRules,
    keep_pos: bool = True,
    period: int = 1,
    exclude_deprels: Iterable[str] = (),
    workers: int = 1,
    chunk_size: int = 5000,
) -> dict[str, SlotProfile]:
    """Accumulate slot filler counts over a corpus, one profile per target.

    With ``workers > 1`` the corpus is sharded into chunks of sentences that
    are counted in separate processes; count tables are summed, so the
    result does not depend on the sharding.
    """
    if period not in (1, 2):
        raise ValueError(f"period must be 1 or 2, got {period}")
    exclude = frozenset(exclude_deprels)
    profiles = {s.id: SlotProfile(s.id, period, {}, 0, keep_pos) for s in specs}
    if workers <= 1:
        parts = [_count(corpus, specs, rules, keep_pos, exclude)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_count, chunk, specs, rules, keep_pos, exclude)
                for chunk in _chunks(corpus, chunk_size)
            ]
            parts = [f.result() for f in futures]
    for occurrences, counts in parts:
        for tid, n in occurrences.items():
            profiles[tid].occurrences += n
        for tid, table in counts.items():
            prof = profiles[tid]
            for (slot, filler), n in table.items():
                prof.add(slot, filler, n)
    return profiles


def save_profiles(profiles: Iterable[SlotProfile], path: str | os.PathLike) -> None:
    docs = [p.to_json() for p in sorted(profiles, key=lambda p: (p.target_id, p.period))]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"profiles": docs}, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")


def load_profiles(path: str | os.PathLike) -> dict[str, SlotProfile]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    docs = doc["profiles"] if isinstance(doc, dict) and "profiles" in doc else doc
    if isinstance(docs, dict):
        docs = [docs]
    out = {}
    for d in docs:
        prof = SlotProfile.from_json(d)
        if prof.target_id in out:
            raise ValueError(f"{path}: duplicate profile for {prof.target_id!r}")
        out[prof.target_id] = prof
    return out
