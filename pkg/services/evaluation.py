"""Evaluation harness: mask IoU/mAP and event-level confusion counts.

The mask score is the mean over IoU thresholds of ``TP / (TP + FP + FN)``
with one lane region per frame. It is a Jaccard-style ratio, not the ranked
average precision used by COCO-style detection benchmarks.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from models import ConfusionCounts, Direction, EvalConfig, EventKind, LaneEvent, Mask
from models.errors import ArtifactFormatError, DimensionMismatchError, FrameMismatchError, UndefinedMetricError
from utils import logger

DIRECTIONS = (Direction.LEFT, Direction.RIGHT)


# ---------------------------------------------------------------------------
# Mask metrics
# ---------------------------------------------------------------------------
def iou(a: Mask, b: Mask) -> float:
    """Intersection over union of two masks' lane pixels.

    Two empty masks score 1.0; exactly one empty mask scores 0.0.

    Raises:
        DimensionMismatchError: If the masks differ in size
    """
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatchError(f"Cannot compare a {a.width}x{a.height} mask with a {b.width}x{b.height} mask")
    pixels_a = a.pixels.astype(bool)
    pixels_b = b.pixels.astype(bool)
    union = int(np.count_nonzero(pixels_a | pixels_b))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(pixels_a & pixels_b)) / union


def mask_confusion(
    predictions: Sequence[Mask],
    truths: Sequence[Mask],
    config: EvalConfig | None = None,
) -> dict[float, ConfusionCounts]:
    """Per-threshold confusion counts of predicted against ground-truth masks.

    A prediction is a TP when its IoU with the frame's truth reaches the
    threshold. An IoU miss counts once as FP and once as FN. A prediction on
    an empty truth is an FP, an empty prediction on a nonempty truth an FN
    and two empty masks a TN.

    Raises:
        FrameMismatchError: If the two sequences do not cover the same frames
    """
    config = config or EvalConfig()
    predicted_frames = [m.frame_index for m in predictions]
    truth_frames = [m.frame_index for m in truths]
    if predicted_frames != truth_frames:
        raise FrameMismatchError(
            f"Prediction covers {len(predicted_frames)} frames, truth {len(truth_frames)}; frame indices must match"
        )

    scores = [(iou(p, t), p.is_empty, t.is_empty) for p, t in zip(predictions, truths, strict=True)]
    counts: dict[float, ConfusionCounts] = {}
    for threshold in config.iou_thresholds:
        tp = fp = fn = tn = 0
        for score, predicted_empty, truth_empty in scores:
            if predicted_empty and truth_empty:
                tn += 1
            elif truth_empty:
                fp += 1
            elif predicted_empty:
                fn += 1
            elif score >= threshold:
                tp += 1
            else:
                fp += 1
                fn += 1
        counts[threshold] = ConfusionCounts(tp, fp, fn, tn)
    return counts


def jaccard_ratio(counts: ConfusionCounts) -> float:
    """TP / (TP + FP + FN); a threshold with nothing to score counts as perfect."""
    denominator = counts.tp + counts.fp + counts.fn
    return 1.0 if denominator == 0 else counts.tp / denominator


def map_score(predictions: Sequence[Mask], truths: Sequence[Mask], config: EvalConfig | None = None) -> float:
    """Mean over IoU thresholds of TP / (TP + FP + FN)."""
    counts = mask_confusion(predictions, truths, config)
    return float(np.mean([jaccard_ratio(c) for c in counts.values()]))


# ---------------------------------------------------------------------------
# Event metrics
# ---------------------------------------------------------------------------
def sensitivity(counts: ConfusionCounts) -> float:
    """TP / (TP + FN).

    Raises:
        UndefinedMetricError: If there are no ground-truth events
    """
    if counts.tp + counts.fn == 0:
        raise UndefinedMetricError("Sensitivity is undefined without ground-truth events (TP + FN = 0)")
    return counts.tp / (counts.tp + counts.fn)


def precision(counts: ConfusionCounts) -> float:
    """TP / (TP + FP).

    Raises:
        UndefinedMetricError: If nothing was predicted
    """
    if counts.tp + counts.fp == 0:
        raise UndefinedMetricError("Precision is undefined without predicted events (TP + FP = 0)")
    return counts.tp / (counts.tp + counts.fp)


def match_events(
    predicted: Sequence[LaneEvent],
    truth: Sequence[LaneEvent],
    config: EvalConfig | None = None,
    kinds: Iterable[EventKind] | None = None,
) -> dict[Direction, ConfusionCounts]:
    """Greedy one-to-one matching of predicted against ground-truth events.

    Predictions are visited in frame order; each takes the nearest unmatched
    truth of the same kind and direction within ``event_match_window``
    frames, ties going to the earlier truth. Matched predictions are TP,
    unmatched predictions FP and unmatched truths FN. A direction with no
    events on either side scores one TN.

    Args:
        predicted: Detected events
        truth: Ground-truth events
        config: Holds the match window
        kinds: Restrict matching to these event kinds (all kinds if None)

    Returns:
        Confusion counts keyed by direction (always LEFT and RIGHT)
    """
    window = (config or EvalConfig()).event_match_window
    allowed = set(kinds) if kinds is not None else set(EventKind)
    predicted = sorted((e for e in predicted if e.kind in allowed), key=lambda e: e.frame_index)
    truth = sorted((e for e in truth if e.kind in allowed), key=lambda e: e.frame_index)

    tallies: dict[Direction, dict[str, int]] = {}

    def tally(direction: Direction) -> dict[str, int]:
        return tallies.setdefault(direction, {"tp": 0, "fp": 0, "fn": 0, "tn": 0})

    matched: set[int] = set()
    for event in predicted:
        best: tuple[int, int, int] | None = None
        for index, candidate in enumerate(truth):
            if index in matched or candidate.kind is not event.kind or candidate.direction is not event.direction:
                continue
            distance = abs(candidate.frame_index - event.frame_index)
            if distance <= window and (best is None or (distance, candidate.frame_index) < best[:2]):
                best = (distance, candidate.frame_index, index)
        if best is None:
            tally(event.direction)["fp"] += 1
        else:
            matched.add(best[2])
            tally(event.direction)["tp"] += 1

    for index, candidate in enumerate(truth):
        if index not in matched:
            tally(candidate.direction)["fn"] += 1

    for direction in DIRECTIONS:
        if direction not in tallies:
            tally(direction)["tn"] = 1

    return {direction: ConfusionCounts(**values) for direction, values in tallies.items()}


def _metric_or_none(metric: Any, counts: ConfusionCounts) -> float | None:
    try:
        return float(metric(counts))
    except UndefinedMetricError:
        return None


def _counts_record(counts: ConfusionCounts) -> dict[str, Any]:
    return {
        "crossing": counts.crossings,
        "tp": counts.tp,
        "fp": counts.fp,
        "fn": counts.fn,
        "tn": counts.tn,
        "sensitivity": _metric_or_none(sensitivity, counts),
        "precision": _metric_or_none(precision, counts),
    }


def _total(counts: Mapping[Direction, ConfusionCounts]) -> ConfusionCounts:
    total = ConfusionCounts()
    for value in counts.values():
        total = total + value
    return total


class EventTally:
    """Accumulates event confusion counts over several clips."""

    def __init__(self, config: EvalConfig | None = None):
        self.config = config or EvalConfig()
        self.changes = {direction: ConfusionCounts() for direction in DIRECTIONS}
        self.incursions = {direction: ConfusionCounts() for direction in DIRECTIONS}
        self.clips = 0

    def add_clip(self, predicted: Sequence[LaneEvent], truth: Sequence[LaneEvent]) -> None:
        for target, kind in ((self.changes, EventKind.CHANGE), (self.incursions, EventKind.INCURSION)):
            for direction, counts in match_events(predicted, truth, self.config, kinds=[kind]).items():
                target[direction] = target.get(direction, ConfusionCounts()) + counts
        self.clips += 1

    @classmethod
    def from_counts(cls, changes: Mapping[Direction, ConfusionCounts], config: EvalConfig | None = None) -> EventTally:
        tally = cls(config)
        tally.changes.update(changes)
        return tally


def parse_counts(document: Mapping[str, Any]) -> dict[Direction, ConfusionCounts]:
    """Read ``{"left": {"tp": .., "fp": .., "fn": ..}, "right": {...}}`` lane-change counts.

    Raises:
        ArtifactFormatError: If a direction or count is missing or malformed
    """
    counts = {}
    for direction in DIRECTIONS:
        entry = document.get(direction.value)
        if not isinstance(entry, Mapping):
            raise ArtifactFormatError(f"Counts file needs a '{direction.value}' object")
        try:
            counts[direction] = ConfusionCounts(
                tp=int(entry["tp"]), fp=int(entry["fp"]), fn=int(entry["fn"]), tn=int(entry.get("tn", 0))
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ArtifactFormatError(f"Malformed '{direction.value}' counts: {entry!r}") from e
    return counts


def build_report(
    tally: EventTally | None = None,
    mask_counts: Mapping[float, ConfusionCounts] | None = None,
) -> dict[str, Any]:
    """Assembles the evaluation report document.

    ``events`` mirrors a per-direction lane change results table (crossings,
    TP, FP, FN). Top-level ``sensitivity``/``precision`` combine both
    directions of lane changes; ``incursions`` and ``overall`` give the same
    metrics for incursions alone and for all event kinds together.
    """
    report: dict[str, Any] = {
        "thresholds": [],
        "mask_counts": {},
        "map": None,
        "events": None,
        "sensitivity": None,
        "precision": None,
        "incursions": None,
        "overall": None,
        "clips": 0,
    }

    if mask_counts:
        report["thresholds"] = list(mask_counts)
        report["mask_counts"] = {
            f"{threshold:g}": {"tp": c.tp, "fp": c.fp, "fn": c.fn, "tn": c.tn} for threshold, c in mask_counts.items()
        }
        report["map"] = float(np.mean([jaccard_ratio(c) for c in mask_counts.values()]))

    if tally is not None:
        changes = _total(tally.changes)
        incursions = _total(tally.incursions)
        report["events"] = {direction.value: _counts_record(tally.changes[direction]) for direction in DIRECTIONS}
        report["sensitivity"] = _metric_or_none(sensitivity, changes)
        report["precision"] = _metric_or_none(precision, changes)
        report["incursions"] = _counts_record(incursions)
        report["overall"] = _counts_record(changes + incursions)
        report["clips"] = tally.clips

        logger.info(
            "  📊 Lane changes: L TP %d FP %d FN %d | R TP %d FP %d FN %d",
            tally.changes[Direction.LEFT].tp,
            tally.changes[Direction.LEFT].fp,
            tally.changes[Direction.LEFT].fn,
            tally.changes[Direction.RIGHT].tp,
            tally.changes[Direction.RIGHT].fp,
            tally.changes[Direction.RIGHT].fn,
        )
    return report


def report_from_counts(document: Mapping[str, Any], config: EvalConfig | None = None) -> dict[str, Any]:
    """Report straight from a per-direction lane change counts document."""
    return build_report(EventTally.from_counts(parse_counts(document), config))
