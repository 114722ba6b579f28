"""Lexical semantic change detection from dependency slot profiles.

Target lemmas are profiled by the fillers of their dependency slots in two
time periods; per-slot Jensen-Shannon divergences are aggregated into a
lemma-level change score.
"""

__version__ = "0.1.0"

from .aggregate import (
    LemmaScore,
    RankedList,
    aggregate_lemma_score,
    classify_changepoint,
    classify_percentile,
    rank_lemmas,
)
from .conllu import Sentence, Token, parse_document, read_corpus, validate_sentence
from .divergence import Distribution, SlotChange, jsd, jsd_decompose, slot_change, to_distribution
from .evaluate import accuracy, load_gold, spearman
from .pipeline import RunConfig, emit_frequency_series, emit_slot_detail, run_pipeline
from .slots import SlotProfile, build_profiles, extract_slots
from .targets import NormalizationRules, TargetSpec, load_targets, matches_target, normalize_token
from .transform import ProfilePair, filter_rare_fillers, strip_pos

__all__ = [
    "Distribution", "LemmaScore", "NormalizationRules", "ProfilePair", "RankedList",
    "RunConfig", "Sentence", "SlotChange", "SlotProfile", "TargetSpec", "Token",
    "accuracy", "aggregate_lemma_score", "build_profiles", "classify_changepoint",
    "classify_percentile", "emit_frequency_series", "emit_slot_detail", "extract_slots",
    "filter_rare_fillers", "jsd", "jsd_decompose", "load_gold", "load_targets",
    "matches_target", "normalize_token", "parse_document", "rank_lemmas", "read_corpus",
    "run_pipeline", "slot_change", "spearman", "strip_pos", "to_distribution",
    "validate_sentence",
]
