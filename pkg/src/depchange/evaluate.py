"""Scoring predictions against SemEval-2020 Task 1 style gold files."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.stats import rankdata


class EvaluationError(ValueError):
    pass


class UndefinedCorrelation(EvaluationError):
    pass


@dataclass
class GoldData:
    graded: dict[str, float] = field(default_factory=dict)
    binary: dict[str, int] = field(default_factory=dict)


def _check_keys(pred: Mapping, gold: Mapping) -> list[str]:
    if set(pred) != set(gold):
        missing = sorted(set(gold) - set(pred))
        extra = sorted(set(pred) - set(gold))
        raise EvaluationError(f"key mismatch: missing predictions {missing}, unknown targets {extra}")
    return sorted(gold)


def spearman(pred: Mapping[str, float], gold: Mapping[str, float]) -> float:
    """Spearman's rho: Pearson correlation of average ranks."""
    keys = _check_keys(pred, gold)
    if len(keys) < 2:
        raise UndefinedCorrelation("undefined correlation: need at least 2 targets")
    rx = rankdata([pred[k] for k in keys])
    ry = rankdata([gold[k] for k in keys])
    dx, dy = rx - rx.mean(), ry - ry.mean()
    sxx, syy = float(np.dot(dx, dx)), float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("undefined correlation: constant ranks")
    rho = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def accuracy(pred: Mapping[str, int], gold: Mapping[str, int]) -> float:
    keys = _check_keys(pred, gold)
    if not keys:
        raise EvaluationError("accuracy of an empty target set")
    return sum(int(pred[k]) == int(gold[k]) for k in keys) / len(keys)


def read_tsv(path: str | os.PathLike) -> dict[str, str]:
    """Two-column ``target<TAB>value`` file into a dict of raw strings."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise EvaluationError(f"{path}:{line_no}: expected 2 tab-separated columns, got {len(cols)}")
            if cols[0] in out:
                raise EvaluationError(f"{path}:{line_no}: duplicate target {cols[0]!r}")
            out[cols[0]] = cols[1]
    return out


def load_graded(path) -> dict[str, float]:
    out = {}
    for k, v in read_tsv(path).items():
        try:
            out[k] = float(v)
        except ValueError:
            raise EvaluationError(f"{path}: non-numeric score {v!r} for {k!r}") from None
    return out


def load_binary(path) -> dict[str, int]:
    out = {}
    for k, v in read_tsv(path).items():
        if v.strip() not in ("0", "1"):
            raise EvaluationError(f"{path}: non-binary label {v!r} for {k!r}")
        out[k] = int(v)
    return out


def load_gold(path_binary=None, path_graded=None) -> GoldData:
    return GoldData(
        graded=load_graded(path_graded) if path_graded else {},
        binary=load_binary(path_binary) if path_binary else {},
    )
