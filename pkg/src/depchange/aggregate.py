"""Lemma-level change scores, ranking, and binary change labels."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Sequence

from .divergence import SlotChange

ROUNDING = {"half-up": ROUND_HALF_UP, "half-even": ROUND_HALF_EVEN}


@dataclass
class LemmaScore:
    target_id: str
    score: float
    slots_used: list[str] = field(default_factory=list)
    slots_total: int = 0
    all_slots: list[SlotChange] = field(default_factory=list)


@dataclass(frozen=True)
class RankedEntry:
    target_id: str
    score: float
    rank: int


@dataclass
class RankedList:
    entries: list[RankedEntry]
    tie_policy: str = "score descending, then target_id ascending"

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> list[str]:
        return [e.target_id for e in self.entries]


def aggregate_lemma_score(
    slot_changes: Sequence[SlotChange],
    threshold: float = 0.5,
    inclusive: bool = False,
    target_id: str = "",
) -> LemmaScore:
    """Mean divergence over the slots above ``threshold``; 0 if there are none."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    used = sorted(
        (c for c in slot_changes if (c.jsd >= threshold if inclusive else c.jsd > threshold)),
        key=lambda c: c.slot,
    )
    # sorted order keeps the float sum independent of the input order
    score = sum(c.jsd for c in used) / len(used) if used else 0.0
    return LemmaScore(
        target_id=target_id,
        score=score,
        slots_used=[c.slot for c in used],
        slots_total=len(slot_changes),
        all_slots=sorted(slot_changes, key=lambda c: c.slot),
    )


def rank_lemmas(scores: Sequence[LemmaScore]) -> RankedList:
    if not scores:
        raise ValueError("nothing to rank")
    order = sorted(scores, key=lambda s: (-s.score, s.target_id))
    return RankedList([RankedEntry(s.target_id, s.score, i) for i, s in enumerate(order, start=1)])


def n_positive(n: int, fraction: float, rounding: str = "half-up") -> int:
    """``fraction * n`` rounded to an integer, using decimal arithmetic."""
    return int((Decimal(repr(fraction)) * n).quantize(Decimal(1), rounding=ROUNDING[rounding]))


def classify_percentile(
    ranked: RankedList, fraction: float = 0.43, rounding: str = "half-up"
) -> dict[str, int]:
    """Label the top ``fraction`` of the ranking as changed."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie strictly between 0 and 1")
    k = n_positive(len(ranked), fraction, rounding)
    return {e.target_id: int(e.rank <= k) for e in ranked.entries}


def best_split(values: Sequence[float]) -> int:
    """Split index k minimizing SSE(values[:k]) + SSE(values[k:]).

    SSE is evaluated as sum(y^2) - sum(y)^2/n from prefix sums in exact
    rational arithmetic, so ties are real ties; the smallest k wins them.
    """
    n = len(values)
    if n < 2:
        raise ValueError("degenerate input: need at least 2 scores")
    ys = [Fraction(v) for v in values]
    s1, s2 = [Fraction(0)], [Fraction(0)]
    for y in ys:
        s1.append(s1[-1] + y)
        s2.append(s2[-1] + y * y)
    best_k, best = 0, None
    for k in range(1, n):
        left = s2[k] - s1[k] ** 2 / k
        rs1, rs2 = s1[n] - s1[k], s2[n] - s2[k]
        right = rs2 - rs1 ** 2 / (n - k)
        total = left + right
        if best is None or total < best:
            best_k, best = k, total
    return best_k


def classify_changepoint(scores: Sequence[LemmaScore]) -> tuple[int, dict[str, int]]:
    """Binary labels from the best two-segment split of the sorted scores.

    Lemmas in the upper segment (the first ``k`` after sorting descending)
    are labelled 1.
    """
    if len(scores) < 2:
        raise ValueError("degenerate input: need at least 2 scores")
    ranked = rank_lemmas(scores)
    k = best_split([e.score for e in ranked.entries])
    return k, {e.target_id: int(e.rank <= k) for e in ranked.entries}
