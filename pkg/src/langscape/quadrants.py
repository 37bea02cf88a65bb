"""Median-split classification into the four representation quadrants.

The medians are the lower-middle order statistic, so the threshold is
always an attained value. "Above" means strictly greater; a score equal
to the median counts as below, which pins the behavior for even-sized
and tied populations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import InputError, QuadrantCategory, QuadrantLabel, ScoreVector

__all__ = [
    "EmptyInput",
    "TooFewLanguages",
    "QuadrantCensus",
    "compute_medians",
    "classify_language",
    "census",
]


class EmptyInput(InputError):
    pass


class TooFewLanguages(InputError):
    pass


def _lower_middle(values: Sequence[float]) -> float:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def compute_medians(scores: Sequence[ScoreVector]) -> tuple[float, float]:
    """Per-dimension medians (lower-middle element for even counts)."""
    if not scores:
        raise EmptyInput("no scores to take medians of")
    return (
        _lower_middle([s.vitality_norm for s in scores]),
        _lower_middle([s.digitality_norm for s in scores]),
    )


def classify_language(score: ScoreVector, medians: tuple[float, float]) -> QuadrantCategory:
    """Four-way split by strict comparison against both medians."""
    vitality_median, digitality_median = medians
    high_vitality = score.vitality_norm > vitality_median
    high_digitality = score.digitality_norm > digitality_median
    if high_vitality and high_digitality:
        label = QuadrantLabel.STRONGHOLD
    elif high_digitality:
        label = QuadrantLabel.DIGITAL_ECHO
    elif high_vitality:
        label = QuadrantLabel.INVISIBLE_GIANT
    else:
        label = QuadrantLabel.FADING_VOICE
    return QuadrantCategory(label=label, vitality_median=vitality_median, digitality_median=digitality_median)


@dataclass(frozen=True)
class QuadrantCensus:
    total: int
    vitality_median: float
    digitality_median: float
    counts: Mapping[QuadrantLabel, int]
    percentages: Mapping[QuadrantLabel, float]

    def to_json_dict(self) -> dict:
        return {
            "medians": {"vitality": self.vitality_median, "digitality": self.digitality_median},
            "counts": {label.value: self.counts[label] for label in QuadrantLabel},
            "percentages": {label.value: self.percentages[label] for label in QuadrantLabel},
            "total": self.total,
        }


def census(scores: Sequence[ScoreVector]) -> QuadrantCensus:
    """Count and percentage per quadrant over the whole population."""
    if len(scores) < 4:
        raise TooFewLanguages(f"census needs at least 4 languages, got {len(scores)}")
    medians = compute_medians(scores)
    counts = {label: 0 for label in QuadrantLabel}
    for score in scores:
        counts[classify_language(score, medians).label] += 1
    total = len(scores)
    percentages = {label: 100.0 * counts[label] / total for label in QuadrantLabel}
    return QuadrantCensus(
        total=total,
        vitality_median=medians[0],
        digitality_median=medians[1],
        counts=counts,
        percentages=percentages,
    )
