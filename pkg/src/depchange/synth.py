"""Synthetic corpora with planted change, and brute-force reference oracles.

Every sentence follows one template::

    the  <adj>  <target>  <verb>
    DET  ADJ    NOUN      VERB
    det  amod   nsubj     root     (heads 3, 3, 4, 0)

so each target occurrence yields one ``chi_det``, one ``chi_amod`` and one
``pa_nsubj`` observation. Every target owns a pool of adjectives and a pool
of verbs. Stable targets sample from the same pools in both periods. For a
changed target the period-2 pools keep the first ``round(overlap * V)``
fillers and replace the rest with fresh ones.

Filler indices are drawn from the RNG independently of ``overlap``; the
overlap only decides how an index is spelled. Lowering the overlap can thus
only split shared fillers apart, never merge them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence


@dataclass(frozen=True)
class SynthSpec:
    n_stable_targets: int = 5
    n_changed_targets: int = 5
    sentences_per_target_per_period: int = 100
    filler_vocab_size: int = 10
    overlap: float = 0.2
    seed: int = 0
    singleton_fillers: int = 0

    def __post_init__(self):
        if self.n_stable_targets < 0 or self.n_changed_targets < 0:
            raise ValueError("target counts must be non-negative")
        if self.n_stable_targets + self.n_changed_targets < 1:
            raise ValueError("need at least one target")
        if self.sentences_per_target_per_period < 1 or self.filler_vocab_size < 1:
            raise ValueError("sizes must be >= 1")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError("overlap must lie in [0, 1]")


@dataclass
class SynthCorpus:
    period_1: str
    period_2: str
    targets: list[str]
    graded: dict[str, float]
    binary: dict[str, int]

    def write(self, directory) -> dict[str, Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        files = {
            "corpus1": ("period1.conllu", self.period_1),
            "corpus2": ("period2.conllu", self.period_2),
            "targets": ("targets.txt", "".join(t + "\n" for t in self.targets)),
            "gold_graded": ("graded.tsv", "".join(f"{t}\t{self.graded[t]}\n" for t in self.targets)),
            "gold_binary": ("binary.tsv", "".join(f"{t}\t{self.binary[t]}\n" for t in self.targets)),
        }
        out = {}
        for key, (name, text) in files.items():
            out[key] = d / name
            out[key].write_text(text, encoding="utf-8")
        return out


def _sentence(sid: str, adj: str, target: str, verb: str) -> str:
    rows = [
        ("1", "the", "the", "DET", "3", "det"),
        ("2", adj, adj, "ADJ", "3", "amod"),
        ("3", target, target, "NOUN", "4", "nsubj"),
        ("4", verb, verb, "VERB", "0", "root"),
    ]
    lines = [f"# sent_id = {sid}"]
    for i, form, lemma, upos, head, rel in rows:
        lines.append("\t".join([i, form, lemma, upos, "_", "_", head, rel, "_", "_"]))
    return "\n".join(lines) + "\n\n"


def generate(spec: SynthSpec) -> SynthCorpus:
    """Build both period corpora, a semeval-style target list and gold labels."""
    rng = random.Random(spec.seed)
    V = spec.filler_vocab_size
    n_shared = round(spec.overlap * V)
    names = [(f"stable{i:02d}", False) for i in range(spec.n_stable_targets)]
    names += [(f"changed{i:02d}", True) for i in range(spec.n_changed_targets)]

    periods: list[list[str]] = [[], []]
    targets, graded, binary = [], {}, {}
    for lemma, changed in names:
        tid = f"{lemma}_nn"
        targets.append(tid)
        graded[tid] = round(1.0 - spec.overlap, 6) if changed else 0.0
        binary[tid] = int(changed and graded[tid] > 0)
        for period in (1, 2):
            for j in range(spec.sentences_per_target_per_period):
                a, v = rng.randrange(V), rng.randrange(V)
                fresh = changed and period == 2
                adj = f"{lemma}adj{a}" + ("x" if fresh and a >= n_shared else "")
                verb = f"{lemma}verb{v}" + ("x" if fresh and v >= n_shared else "")
                periods[period - 1].append(_sentence(f"{lemma}-p{period}-{j}", adj, lemma, verb))
            for j in range(spec.singleton_fillers):
                periods[period - 1].append(
                    _sentence(f"{lemma}-p{period}-s{j}", f"{lemma}once{period}a{j}", lemma,
                              f"{lemma}once{period}v{j}")
                )
    return SynthCorpus("".join(periods[0]), "".join(periods[1]), targets, graded, binary)


# -- oracles -------------------------------------------------------------------
# Written without reference to the production modules: no shared helpers,
# different formulas.

def oracle_jsd(P: Mapping[str, float], Q: Mapping[str, float]) -> float:
    """JSD in bits as 1/2 KL(P||M) + 1/2 KL(Q||M)."""
    M = {k: 0.5 * (P.get(k, 0.0) + Q.get(k, 0.0)) for k in set(P) | set(Q)}

    def kl(A):
        total = 0.0
        for k, a in A.items():
            if a > 0:
                total += a * math.log(a / M[k])
        return total / math.log(2)

    return 0.5 * kl(P) + 0.5 * kl(Q)


def oracle_contributions(P: Mapping[str, float], Q: Mapping[str, float]) -> dict[str, float]:
    out = {}
    for k in set(P) | set(Q):
        p, q = P.get(k, 0.0), Q.get(k, 0.0)
        m = 0.5 * (p + q)
        out[k] = sum(0.5 * x * math.log(x / m) / math.log(2) for x in (p, q) if x > 0)
    return out


def _scaled_ints(values: Sequence[float]) -> list[int]:
    """Every float is an exact dyadic rational; scale them onto a common grid."""
    fracs = [Fraction(v) for v in values]
    denom = max(f.denominator for f in fracs)
    return [int(f * denom) for f in fracs]


def _scaled_sse(segment: Sequence[int]) -> Fraction:
    # sum of (y - mean)^2, written as sum of (m*y - S)^2 / m^2 to stay in integers
    m, s = len(segment), sum(segment)
    return Fraction(sum((m * y - s) ** 2 for y in segment), m * m)


def oracle_split(scores: Sequence[float]) -> int:
    """Exhaustive search over all splits of the descending-sorted scores.

    Segment cost is the sum of squared deviations from the segment mean,
    evaluated exactly; the first (smallest) minimizing k is returned.
    """
    if len(scores) < 2:
        raise ValueError("degenerate input: need at least 2 scores")
    ys = _scaled_ints(sorted(scores, reverse=True))
    costs = [_scaled_sse(ys[:k]) + _scaled_sse(ys[k:]) for k in range(1, len(ys))]
    return 1 + costs.index(min(costs))
