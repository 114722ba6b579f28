"""Jensen-Shannon divergence between slot filler distributions.

Everything is computed in bits, so divergences lie in [0, 1]. Sums run over
fillers in sorted order through :func:`math.fsum`, which makes the results
independent of dictionary order and exactly symmetric in the two arguments.

The per-filler split of the divergence is::

    c_f = p_f/2 * log2(p_f/m_f) + q_f/2 * log2(q_f/m_f),   m_f = (p_f + q_f)/2

Each term is non-negative and the terms add up to the divergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

INCREASE = "increase"
DECREASE = "decrease"
UNCHANGED = "unchanged"


class EmptySlotSide(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    probs: Mapping[str, float]

    def __post_init__(self):
        if not self.probs:
            raise EmptySlotSide("empty slot side")
        if any(p <= 0 for p in self.probs.values()):
            raise ValueError("probabilities must be strictly positive")
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, filler: str) -> float:
        return self.probs.get(filler, 0.0)

    def support(self) -> frozenset[str]:
        return frozenset(self.probs)


@dataclass(frozen=True)
class FillerContribution:
    filler: str
    contribution: float
    direction: str
    prob_1: float = 0.0
    prob_2: float = 0.0
    count_1: int = 0
    count_2: int = 0


@dataclass(frozen=True)
class SlotChange:
    slot: str
    jsd: float
    contributions: tuple[FillerContribution, ...] = field(default_factory=tuple)
    support_1: int = 0
    support_2: int = 0


def to_distribution(counts: Mapping[str, int]) -> Distribution:
    """Relative frequencies, no smoothing."""
    if not counts:
        raise EmptySlotSide("empty slot side")
    if any(n < 1 for n in counts.values()):
        raise ValueError("counts must be positive integers")
    total = sum(counts.values())
    return Distribution({f: n / total for f, n in counts.items()})


def _plogp(p: float) -> float:
    return p * math.log2(p) if p > 0 else 0.0


def entropy(probs) -> float:
    return -math.fsum(_plogp(p) for p in probs)


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def jsd(P: Distribution, Q: Distribution) -> float:
    """Jensen-Shannon divergence in bits, as H(M) - (H(P) + H(Q)) / 2."""
    if P.probs == Q.probs:
        return 0.0
    keys = sorted(P.support() | Q.support())
    if P.support().isdisjoint(Q.support()):
        return 1.0
    p = [P[k] for k in keys]
    q = [Q[k] for k in keys]
    hm = entropy((a + b) / 2 for a, b in zip(p, q))
    return _clamp(hm - (entropy(p) + entropy(q)) / 2)


def _term(x: float, m: float) -> float:
    return x / 2 * math.log2(x / m) if x > 0 else 0.0


def _direction(p: float, q: float) -> str:
    if q > p:
        return INCREASE
    if q < p:
        return DECREASE
    return UNCHANGED


def _sort(contribs) -> tuple[FillerContribution, ...]:
    return tuple(sorted(contribs, key=lambda c: (-c.contribution, c.filler)))


def jsd_decompose(P: Distribution, Q: Distribution, slot: str = "") -> SlotChange:
    """Divergence plus per-filler contributions, largest first."""
    contribs = []
    for k in sorted(P.support() | Q.support()):
        p, q = P[k], Q[k]
        m = (p + q) / 2
        contribs.append(FillerContribution(k, _term(p, m) + _term(q, m), _direction(p, q), p, q))
    return SlotChange(slot, jsd(P, Q), _sort(contribs))


def slot_change(slot: str, counts_1: Mapping[str, int], counts_2: Mapping[str, int]) -> SlotChange:
    """Compare one slot's filler counts across the two periods.

    A slot attested in only one period has nothing to overlap with and gets
    divergence 1; each filler then contributes its own probability.
    """
    n1, n2 = sum(counts_1.values()), sum(counts_2.values())
    if not counts_1 and not counts_2:
        raise EmptySlotSide(f"slot {slot!r} is empty in both periods")
    if not counts_1 or not counts_2:
        dist = to_distribution(counts_1 or counts_2)
        contribs = []
        for k in sorted(dist.probs):
            p = dist.probs[k]
            if counts_1:
                contribs.append(FillerContribution(k, p, DECREASE, p, 0.0, counts_1[k], 0))
            else:
                contribs.append(FillerContribution(k, p, INCREASE, 0.0, p, 0, counts_2[k]))
        return SlotChange(slot, 1.0, _sort(contribs), n1, n2)
    base = jsd_decompose(to_distribution(counts_1), to_distribution(counts_2), slot)
    contribs = tuple(
        FillerContribution(
            c.filler, c.contribution, c.direction, c.prob_1, c.prob_2,
            counts_1.get(c.filler, 0), counts_2.get(c.filler, 0),
        )
        for c in base.contributions
    )
    return SlotChange(slot, base.jsd, contribs, n1, n2)
