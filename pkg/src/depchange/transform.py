"""Denoising of paired period profiles before divergence is computed."""

from __future__ import annotations

from dataclasses import dataclass

from .slots import SlotProfile

FILTER_FIRST = "filter-first"
STRIP_FIRST = "strip-first"


@dataclass
class ProfilePair:
    target_id: str
    p1: SlotProfile
    p2: SlotProfile

    def __post_init__(self):
        if self.p1.period != 1 or self.p2.period != 2:
            raise ValueError("ProfilePair expects a period-1 and a period-2 profile")
        if not (self.target_id == self.p1.target_id == self.p2.target_id):
            raise ValueError("ProfilePair profiles belong to different targets")

    def slots(self) -> list[str]:
        return sorted(set(self.p1.counts) | set(self.p2.counts))


def filter_rare_fillers(pair: ProfilePair, min_total: int = 2) -> ProfilePair:
    """Drop fillers whose count summed over both periods is below ``min_total``.

    Slots that end up empty in both periods disappear.
    """
    if min_total < 1:
        raise ValueError("min_total must be >= 1")
    p1, p2 = pair.p1.copy(), pair.p2.copy()
    if min_total == 1:
        return ProfilePair(pair.target_id, p1, p2)
    for slot in pair.slots():
        c1 = p1.counts.get(slot, {})
        c2 = p2.counts.get(slot, {})
        for filler in set(c1) | set(c2):
            if c1.get(filler, 0) + c2.get(filler, 0) < min_total:
                c1.pop(filler, None)
                c2.pop(filler, None)
        for prof in (p1, p2):
            if slot in prof.counts and not prof.counts[slot]:
                del prof.counts[slot]
    return ProfilePair(pair.target_id, p1, p2)


def _strip(prof: SlotProfile) -> SlotProfile:
    out = SlotProfile(prof.target_id, prof.period, {}, prof.occurrences, pos_tagged=False)
    for slot, table in prof.counts.items():
        for filler, n in table.items():
            out.add(slot, filler.rpartition("/")[0] if "/" in filler else filler, n)
    return out


def strip_pos(pair: ProfilePair) -> ProfilePair:
    """Remove the ``/UPOS`` suffix from filler keys, summing collisions.

    Profiles already marked as untagged are returned unchanged, which keeps
    lemmas that themselves contain a slash intact on repeated application.
    """
    p1 = _strip(pair.p1) if pair.p1.pos_tagged else pair.p1.copy()
    p2 = _strip(pair.p2) if pair.p2.pos_tagged else pair.p2.copy()
    return ProfilePair(pair.target_id, p1, p2)


def denoise(
    pair: ProfilePair,
    min_total: int = 2,
    remove_pos: bool = True,
    order: str = FILTER_FIRST,
) -> ProfilePair:
    if order == FILTER_FIRST:
        pair = filter_rare_fillers(pair, min_total)
        return strip_pos(pair) if remove_pos else pair
    if order == STRIP_FIRST:
        if remove_pos:
            pair = strip_pos(pair)
        return filter_rare_fillers(pair, min_total)
    raise ValueError(f"unknown transform order {order!r}")
