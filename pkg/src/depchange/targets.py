"""Target lemmas and the normalization applied before matching them.

Two presets reproduce the usual ways of reconciling parser output with a
gold target list:

* ``se``: every token whose lemma matches a target is POS-neutral
  (``tar_mode``), plus an optional spelling map.
* ``sz``: ``PROPN`` is coerced to ``NOUN``, plus an optional spelling map.
"""

from __future__ import annotations

import os
import unicodedata
from dataclasses import dataclass, field, replace
from typing import Mapping

from .conllu import Token

# SemEval-2020 Task 1 English suffixes; other languages carry none.
SEMEVAL_POS = {
    "nn": frozenset({"NOUN"}),
    "vb": frozenset({"VERB"}),
    "jj": frozenset({"ADJ"}),
    "rb": frozenset({"ADV"}),
}


class TargetError(ValueError):
    pass


@dataclass(frozen=True)
class TargetSpec:
    lemma: str
    pos_filter: frozenset[str] = frozenset()
    id: str = ""

    def __post_init__(self):
        if not self.lemma:
            raise TargetError("target lemma must be non-empty")
        if not self.id:
            object.__setattr__(self, "id", self.lemma)
        object.__setattr__(self, "pos_filter", frozenset(self.pos_filter))


def fold(lemma: str, case_sensitive: bool = False) -> str:
    lemma = unicodedata.normalize("NFC", lemma)
    return lemma if case_sensitive else lemma.casefold()


@dataclass(frozen=True)
class NormalizationRules:
    propn_to_noun: bool = False
    spelling_map: Mapping[str, str] = field(default_factory=dict)
    tar_mode: bool = False
    case_sensitive: bool = False

    def __post_init__(self):
        folded = {
            fold(k, self.case_sensitive): unicodedata.normalize("NFC", v)
            for k, v in self.spelling_map.items()
        }
        for variant, canonical in folded.items():
            c = fold(canonical, self.case_sensitive)
            if c != variant and c in folded:
                raise TargetError(
                    f"spelling map is chained: {variant!r} -> {canonical!r} -> {folded[c]!r}"
                )
        object.__setattr__(self, "spelling_map", folded)

    @classmethod
    def preset(cls, mode: str, spelling_map: Mapping[str, str] | None = None,
               case_sensitive: bool = False) -> "NormalizationRules":
        spelling_map = dict(spelling_map or {})
        if mode == "se":
            return cls(tar_mode=True, spelling_map=spelling_map, case_sensitive=case_sensitive)
        if mode == "sz":
            return cls(propn_to_noun=True, spelling_map=spelling_map, case_sensitive=case_sensitive)
        raise TargetError(f"unknown mode {mode!r} (expected 'se' or 'sz')")

    def check_targets(self, specs: list[TargetSpec]) -> None:
        """Every spelling-map value must be the lemma of some target."""
        lemmas = {fold(s.lemma, self.case_sensitive) for s in specs}
        for variant, canonical in self.spelling_map.items():
            if fold(canonical, self.case_sensitive) not in lemmas:
                raise TargetError(
                    f"spelling map value {canonical!r} (for {variant!r}) is not a target lemma"
                )


def parse_target_line(line: str, fmt: str) -> TargetSpec:
    name = line.strip().split("\t")[0].strip()
    if fmt == "plain":
        return TargetSpec(lemma=name, id=name)
    if fmt != "semeval":
        raise TargetError(f"unknown targets format {fmt!r}")
    lemma, sep, code = name.rpartition("_")
    if not sep:
        return TargetSpec(lemma=name, id=name)
    if code not in SEMEVAL_POS:
        raise TargetError(f"unknown POS code {code!r} in target {name!r}")
    return TargetSpec(lemma=lemma, pos_filter=SEMEVAL_POS[code], id=name)


def load_targets(path: str | os.PathLike, fmt: str = "semeval") -> list[TargetSpec]:
    """Read one target per line; blank lines are ignored, ids must be unique."""
    specs: list[TargetSpec] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                spec = parse_target_line(line, fmt)
            except TargetError as exc:
                raise TargetError(f"{path}:{line_no}: {exc}") from None
            if spec.id in seen:
                raise TargetError(f"{path}:{line_no}: duplicate target id {spec.id!r}")
            seen.add(spec.id)
            specs.append(spec)
    return specs


def load_spelling_map(path: str | os.PathLike) -> dict[str, str]:
    """Read a ``variant<TAB>canonical`` TSV."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2 or not cols[0] or not cols[1]:
                raise TargetError(f"{path}:{line_no}: expected 'variant<TAB>canonical'")
            mapping[cols[0]] = cols[1]
    return mapping


def normalize_token(t: Token, rules: NormalizationRules) -> Token:
    """Return a copy of ``t`` with the normalization rules applied."""
    lemma = unicodedata.normalize("NFC", t.lemma)
    canonical = rules.spelling_map.get(fold(lemma, rules.case_sensitive))
    if canonical is not None:
        lemma = canonical
    upos = "NOUN" if rules.propn_to_noun and t.upos == "PROPN" else t.upos
    if lemma == t.lemma and upos == t.upos:
        return t
    return replace(t, lemma=lemma, upos=upos)


def matches_target(t: Token, spec: TargetSpec, rules: NormalizationRules) -> bool:
    """``t`` is assumed to be already normalized."""
    if fold(t.lemma, rules.case_sensitive) != fold(spec.lemma, rules.case_sensitive):
        return False
    return not spec.pos_filter or rules.tar_mode or t.upos in spec.pos_filter
