"""Lane offset tracking: hull centroids to a centered, smoothed offset series."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from config.mask_config import DEFAULT_FPS, KEEP_ROW_EXTREMES, MAX_POINTS
from config.tracking_config import CENTERING_WINDOW
from models import (
    CenteringMode,
    KalmanConfig,
    Line2D,
    Mask,
    OffsetSample,
    OffsetSeries,
    RoiMask,
    RunConfig,
    SeriesStage,
    TrackingResult,
)
from models.errors import DegenerateInputError, EmptyMaskError, EmptySequenceError, NoValidSamplesError
from utils import logger, point_line_distance, polygon_centroid, signed_center_offset

from .kalman_smoothing import kalman_smooth
from .mask_preparation import extract_hull

# Frames handed to the worker pool at a time; bounds how many rasters are held in memory
_BATCH_PER_WORKER = 16


def frame_offset(
    mask: Mask,
    roi: RoiMask | None = None,
    max_points: int = MAX_POINTS,
    keep_row_extremes: bool = KEEP_ROW_EXTREMES,
) -> OffsetSample:
    """Offsets of one frame's hull centroid; invalid when the mask yields no hull."""
    try:
        centroid = polygon_centroid(
            extract_hull(mask, roi=roi, max_points=max_points, keep_row_extremes=keep_row_extremes)
        )
    except (EmptyMaskError, DegenerateInputError) as e:
        logger.debug("Frame %d has no usable lane region: %s", mask.frame_index, e)
        return OffsetSample(mask.frame_index, float("nan"), float("nan"), valid=False)

    vertical = signed_center_offset(centroid, mask.width / 2.0)
    horizontal = point_line_distance(Line2D.horizontal(float(mask.height)), centroid)
    return OffsetSample(mask.frame_index, vertical, horizontal, valid=True)


def _batched(masks: Iterable[Mask], size: int) -> Iterator[list[Mask]]:
    iterator = iter(masks)
    while batch := list(itertools.islice(iterator, size)):
        yield batch


def compute_offsets(
    masks: Iterable[Mask],
    roi: RoiMask | None = None,
    *,
    max_points: int = MAX_POINTS,
    keep_row_extremes: bool = KEEP_ROW_EXTREMES,
    workers: int = 1,
    fps: float = DEFAULT_FPS,
) -> OffsetSeries:
    """Computes the raw offset series of a clip.

    Each frame is ROI-filtered, reduced to points and hulled; the hull's area
    centroid gives the signed offset from the vertical line ``x = width / 2``
    and the distance to the bottom edge ``y = height``. Frames without a lane
    region become invalid samples rather than errors. With ``workers > 1``
    frames are hulled on a thread pool; results keep frame order.

    Raises:
        EmptySequenceError: If there are no masks
        SequenceOrderError: If frame indices are not strictly increasing
    """

    def offset_of(mask: Mask) -> OffsetSample:
        return frame_offset(mask, roi=roi, max_points=max_points, keep_row_extremes=keep_row_extremes)

    samples: list[OffsetSample] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for batch in _batched(masks, workers * _BATCH_PER_WORKER):
                samples.extend(executor.map(offset_of, batch))
    else:
        samples.extend(offset_of(mask) for mask in masks)

    if not samples:
        raise EmptySequenceError("Cannot track a clip with no frames")

    series = OffsetSeries(tuple(samples), SeriesStage.RAW, fps)
    invalid = len(series) - series.valid_count
    if invalid:
        logger.warning("  ⚠️ %d of %d frames had no usable lane region", invalid, len(series))
    return series


def center_series(
    series: OffsetSeries,
    mode: CenteringMode = CenteringMode.GLOBAL,
    window: int = CENTERING_WINDOW,
) -> OffsetSeries:
    """Subtracts the mean of valid offsets so the series is centered at zero.

    ``GLOBAL`` uses one mean over the whole clip. ``WINDOW`` subtracts, per
    sample, the mean of valid samples whose frame index lies within
    ``window // 2`` frames, which follows slow camera-mount drift.

    Raises:
        NoValidSamplesError: If the series has no valid sample
    """
    valid = series.valid_mask()
    if not valid.any():
        raise NoValidSamplesError("Cannot center a series with no valid samples")

    values = series.values()
    centered = np.full(len(series), np.nan)
    if mode is CenteringMode.GLOBAL:
        centered[valid] = values[valid] - values[valid].mean()
    else:
        frames = series.frame_indices()[valid]
        observed = values[valid]
        cumulative = np.concatenate(([0.0], np.cumsum(observed)))
        half = window // 2
        lo = np.searchsorted(frames, frames - half, side="left")
        hi = np.searchsorted(frames, frames + half, side="right")
        centered[valid] = observed - (cumulative[hi] - cumulative[lo]) / (hi - lo)

    return series.with_values(centered, SeriesStage.CENTERED)


def split_segments(series: OffsetSeries, max_gap: int | None = None) -> list[tuple[int, int]]:
    """Splits a series at runs of more than ``max_gap`` missing or invalid frames.

    Args:
        series: Any-stage offset series
        max_gap: Longest bridged run; defaults to one second of frames

    Returns:
        Inclusive ``(first_frame, last_frame)`` ranges, each starting and
        ending on a valid sample
    """
    if max_gap is None:
        max_gap = round(series.fps)
    frames = series.frame_indices()[series.valid_mask()]
    if len(frames) == 0:
        return []
    breaks = np.flatnonzero(np.diff(frames) - 1 > max_gap)
    starts = np.r_[0, breaks + 1]
    ends = np.r_[breaks, len(frames) - 1]
    return [(int(frames[s]), int(frames[e])) for s, e in zip(starts, ends, strict=True)]


class OffsetTracker:
    """Runs offsets, centering, segmentation and smoothing for one clip."""

    def __init__(
        self,
        kalman: KalmanConfig | None = None,
        *,
        max_points: int = MAX_POINTS,
        keep_row_extremes: bool = KEEP_ROW_EXTREMES,
        centering: CenteringMode = CenteringMode.GLOBAL,
        centering_window: int = CENTERING_WINDOW,
        workers: int = 1,
    ):
        self.kalman = kalman or KalmanConfig()
        self.max_points = max_points
        self.keep_row_extremes = keep_row_extremes
        self.centering = centering
        self.centering_window = centering_window
        self.workers = workers

    @classmethod
    def from_run_config(cls, config: RunConfig) -> OffsetTracker:
        return cls(
            config.kalman,
            max_points=config.max_points,
            keep_row_extremes=config.keep_row_extremes,
            centering=config.centering,
            centering_window=config.centering_window,
            workers=config.workers,
        )

    def track(self, masks: Iterable[Mask], roi: RoiMask | None = None, fps: float = DEFAULT_FPS) -> TrackingResult:
        """Main entry point for tracking a clip."""
        raw = compute_offsets(
            masks,
            roi,
            max_points=self.max_points,
            keep_row_extremes=self.keep_row_extremes,
            workers=self.workers,
            fps=fps,
        )
        logger.info("  📐 Raw offsets: %d frames, %d valid", len(raw), raw.valid_count)

        if raw.valid_count == 0:
            logger.warning("  ⚠️ No frame has a usable lane region; every offset stays invalid")
            blank = np.full(len(raw), np.nan)
            centered = raw.with_values(blank, SeriesStage.CENTERED)
            return TrackingResult(raw=raw, centered=centered, smoothed=centered.with_values(blank, SeriesStage.SMOOTHED), segments=[])

        centered = center_series(raw, self.centering, self.centering_window)
        segments = split_segments(centered)
        if len(segments) > 1:
            logger.info("  ✂️ Detection gaps split the clip into %d segments", len(segments))

        smoothed = kalman_smooth(centered, self.kalman, segments)
        return TrackingResult(raw=raw, centered=centered, smoothed=smoothed, segments=segments)


def track_clip(
    masks: Iterable[Mask],
    config: RunConfig,
    roi: RoiMask | None = None,
    fps: float = DEFAULT_FPS,
) -> TrackingResult:
    """Tracks the lane offset of one clip with the run's settings."""
    return OffsetTracker.from_run_config(config).track(masks, roi=roi, fps=fps)
