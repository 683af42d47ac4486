"""Peak detection and lane event classification on the smoothed offset series.

A lane change shows up as a high peak while the vehicle drifts out of its
lane followed by a depression zone once the new lane's region takes over,
so an opposite-signed extremum pair close in time is a change. A lone
extremum with no depression partner is an incursion.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import find_peaks, peak_prominences

from config.mask_config import DEFAULT_FPS
from models import Direction, EventKind, Extremum, ExtremumKind, LaneEvent, OffsetSeries, PeakConfig
from utils import frame_to_timestamp_ms, logger


def mirror_series(series: OffsetSeries) -> OffsetSeries:
    """Pointwise negation; peaks of the mirror are troughs of the original."""
    return series.with_values(-series.values(), series.stage)


def _finite_runs(values: np.ndarray) -> list[tuple[int, int]]:
    """Half-open index ranges of consecutive finite values."""
    finite = np.concatenate(([False], np.isfinite(values), [False]))
    edges = np.flatnonzero(np.diff(finite.astype(np.int8)))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist(), strict=True))


def _select_by_frame_distance(indices: np.ndarray, heights: np.ndarray, frames: np.ndarray, distance: int) -> np.ndarray:
    """Keeps the highest candidates, dropping any closer than ``distance`` frames to a kept one.

    Samples may skip frames, so the distance is measured on frame indices
    rather than on array positions.
    """
    keep = np.ones(len(indices), dtype=bool)
    candidate_frames = frames[indices]
    for position in np.argsort(heights[indices], kind="stable")[::-1]:
        if not keep[position]:
            continue
        close = np.abs(candidate_frames - candidate_frames[position]) < distance
        close[position] = False
        keep &= ~close
    return indices[keep]


def detect_peaks(series: OffsetSeries, config: PeakConfig | None = None) -> list[Extremum]:
    """Finds prominent peaks and troughs of a smoothed series.

    Peaks are local maxima of the series, troughs local maxima of its
    mirror. Both must clear ``min_prominence`` and be at least
    ``min_peak_distance`` frames from another extremum of the same kind.
    Runs of NaN split the series into independently searched segments.

    Args:
        series: Smoothed (centered) offset series
        config: Peak detection parameters

    Returns:
        Extrema sorted by frame index
    """
    config = config or PeakConfig()
    values = series.values()
    frames = series.frame_indices()

    extrema: list[Extremum] = []
    for segment, (start, stop) in enumerate(_finite_runs(values)):
        window = values[start:stop]
        window_frames = frames[start:stop]
        for kind, signal in ((ExtremumKind.PEAK, window), (ExtremumKind.TROUGH, -window)):
            candidates, _ = find_peaks(signal)
            candidates = _select_by_frame_distance(candidates, signal, window_frames, config.min_peak_distance)
            prominences = peak_prominences(signal, candidates)[0]
            prominent = prominences >= config.min_prominence
            for index, prominence in zip(candidates[prominent], prominences[prominent], strict=True):
                amplitude = float(window[index])
                # Extrema on the wrong side of zero carry no direction
                if (kind is ExtremumKind.PEAK and amplitude <= 0) or (kind is ExtremumKind.TROUGH and amplitude >= 0):
                    continue
                extrema.append(
                    Extremum(
                        frame_index=int(frames[start + index]),
                        amplitude=amplitude,
                        kind=kind,
                        prominence=float(prominence),
                        segment=segment,
                    )
                )

    extrema.sort(key=lambda e: (e.frame_index, e.kind.value))
    logger.debug(
        "Detected %d peaks and %d troughs",
        sum(e.kind is ExtremumKind.PEAK for e in extrema),
        sum(e.kind is ExtremumKind.TROUGH for e in extrema),
    )
    return extrema


def _direction(kind: ExtremumKind, invert: bool) -> Direction:
    direction = Direction.LEFT if kind is ExtremumKind.PEAK else Direction.RIGHT
    return direction.mirrored if invert else direction


class EventClassifier:
    """Pairs extrema into lane changes and keeps the rest as incursions."""

    def __init__(self, config: PeakConfig | None = None, fps: float = DEFAULT_FPS):
        self.config = config or PeakConfig()
        self.fps = fps

    def classify(self, extrema: list[Extremum]) -> list[LaneEvent]:
        """Main entry point for classification."""
        if not extrema:
            return []

        changes, candidates = self._pair_extrema(extrema)
        incursions = self._apply_shallowness_gate(candidates, changes)

        events = sorted(changes + incursions, key=lambda e: e.frame_index)
        logger.info(
            "  🚗 Classified %d lane change(s) and %d incursion(s) from %d extrema",
            len(changes),
            len(incursions),
            len(extrema),
        )
        return events

    def _pair_extrema(self, extrema: list[Extremum]) -> tuple[list[LaneEvent], list[Extremum]]:
        """Greedy left-to-right pairing of each extremum with the next opposite one in range."""
        consumed: set[int] = set()
        changes: list[LaneEvent] = []
        unpaired: list[Extremum] = []

        for i, first in enumerate(extrema):
            if i in consumed:
                continue
            consumed.add(i)
            partner = None
            for j in range(i + 1, len(extrema)):
                second = extrema[j]
                gap = second.frame_index - first.frame_index
                if gap > self.config.max_pair_distance:
                    break
                if j in consumed or second.segment != first.segment or second.kind is not first.kind.opposite:
                    continue
                if gap > 0:
                    partner = j
                    break

            if partner is None:
                unpaired.append(first)
                continue

            consumed.add(partner)
            second = extrema[partner]
            changes.append(
                LaneEvent(
                    kind=EventKind.CHANGE,
                    direction=_direction(first.kind, self.config.invert_direction),
                    frame_index=first.frame_index,
                    timestamp_ms=frame_to_timestamp_ms(first.frame_index, self.fps),
                    peak_frames=(first.frame_index, second.frame_index),
                    amplitudes=(first.amplitude, second.amplitude),
                )
            )
        return changes, unpaired

    def _apply_shallowness_gate(self, candidates: list[Extremum], changes: list[LaneEvent]) -> list[LaneEvent]:
        """Keep incursion candidates shallower than the clip's typical lane change."""
        ceiling = None
        if self.config.shallowness_gate and len(changes) >= self.config.shallowness_min_changes:
            change_amplitudes = [
                (abs(e.amplitudes[0]) + abs(e.amplitudes[1] or 0.0)) / 2.0 for e in changes
            ]
            ceiling = self.config.shallowness_ratio * float(np.median(change_amplitudes))

        incursions = []
        for extremum in candidates:
            if ceiling is not None and abs(extremum.amplitude) > ceiling:
                logger.info(
                    "  📉 Dropped incursion candidate at frame %d: |%.1f| px above shallowness ceiling %.1f px",
                    extremum.frame_index,
                    extremum.amplitude,
                    ceiling,
                )
                continue
            incursions.append(
                LaneEvent(
                    kind=EventKind.INCURSION,
                    direction=_direction(extremum.kind, self.config.invert_direction),
                    frame_index=extremum.frame_index,
                    timestamp_ms=frame_to_timestamp_ms(extremum.frame_index, self.fps),
                    peak_frames=(extremum.frame_index, None),
                    amplitudes=(extremum.amplitude, None),
                )
            )
        return incursions

    def classify_series(self, series: OffsetSeries) -> list[LaneEvent]:
        """Detect extrema on a smoothed series and classify them."""
        return self.classify(detect_peaks(series, self.config))


def classify_events(
    extrema: list[Extremum],
    config: PeakConfig | None = None,
    fps: float = DEFAULT_FPS,
) -> list[LaneEvent]:
    """Classifies sorted extrema into lane changes and incursions.

    Each unconsumed extremum is paired with the earliest later extremum of
    the opposite kind in the same segment within ``max_pair_distance``
    frames. Peak-then-trough is a left change and trough-then-peak a right
    change (swapped by ``invert_direction``). Extrema left unpaired become
    incursions, subject to the optional shallowness gate.
    """
    return EventClassifier(config, fps=fps).classify(extrema)
