"""Fixed-lag Kalman smoothing of the centered offset series.

The state is ``[offset, offset_rate]`` under a constant-velocity model driven
by white acceleration noise. A forward Kalman pass stores the filtered and
predicted moments; the estimate for frame ``t`` is then pulled back with the
Rauch-Tung-Striebel recursion from the last frame at or before ``t + lag``,
so it only ever depends on measurements up to ``lag`` frames ahead.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from models import KalmanConfig, OffsetSeries, SeriesStage
from models.errors import DimensionMismatchError, InvalidConfigError, SequenceOrderError
from utils import logger

FloatArray = npt.NDArray[np.float64]


class FixedLagSmoother:
    """Constant-velocity fixed-lag smoother for one contiguous segment."""

    def __init__(self, config: KalmanConfig | None = None):
        self.config = config or KalmanConfig()

    def _transition(self, dt: float) -> tuple[FloatArray, FloatArray]:
        q = self.config.process_noise
        transition = np.array([[1.0, dt], [0.0, 1.0]])
        noise = q * np.array([[dt**4 / 4.0, dt**3 / 2.0], [dt**3 / 2.0, dt**2]])
        return transition, noise

    def smooth_segment(self, frames: npt.ArrayLike, measurements: npt.ArrayLike) -> FloatArray:
        """Smooth one segment.

        Args:
            frames: Strictly increasing frame indices
            measurements: Offsets, NaN where the frame has no detection;
                the first value must be finite

        Returns:
            Smoothed offsets, one per frame

        Raises:
            SequenceOrderError: If frames are not strictly increasing
            InvalidConfigError: If the first measurement is missing
        """
        frames = np.asarray(frames, dtype=np.int64)
        z = np.asarray(measurements, dtype=np.float64)
        if frames.shape != z.shape:
            raise DimensionMismatchError(f"{len(frames)} frames but {len(z)} measurements")
        count = len(frames)
        if count == 0:
            return np.empty(0)
        if np.any(np.diff(frames) <= 0):
            raise SequenceOrderError("Segment frame indices must be strictly increasing")
        if not np.isfinite(z[0]):
            raise InvalidConfigError("A segment must start with a valid measurement")

        r = self.config.measurement_noise
        x_filt = np.zeros((count, 2))
        p_filt = np.zeros((count, 2, 2))
        x_pred = np.zeros((count, 2))
        p_pred = np.zeros((count, 2, 2))
        gains = np.zeros((count, 2, 2))

        # Start at the first measurement with zero rate
        x_filt[0] = (z[0], 0.0)
        p_filt[0] = np.diag((r, self.config.initial_velocity_variance))
        x_pred[0], p_pred[0] = x_filt[0], p_filt[0]

        for k in range(1, count):
            transition, noise = self._transition(float(frames[k] - frames[k - 1]))
            x_pred[k] = transition @ x_filt[k - 1]
            p_pred[k] = transition @ p_filt[k - 1] @ transition.T + noise
            gains[k - 1] = p_filt[k - 1] @ transition.T @ np.linalg.inv(p_pred[k])

            if np.isfinite(z[k]):
                innovation_var = p_pred[k, 0, 0] + r
                kalman_gain = p_pred[k, :, 0] / innovation_var
                x_filt[k] = x_pred[k] + kalman_gain * (z[k] - x_pred[k, 0])
                p_filt[k] = p_pred[k] - np.outer(kalman_gain, p_pred[k, 0, :])
            else:
                x_filt[k], p_filt[k] = x_pred[k], p_pred[k]

        # Backward pass, vectorized over all target frames by recursion depth
        ends = np.searchsorted(frames, frames + self.config.lag, side="right") - 1
        depth = ends - np.arange(count)
        x_smooth = x_filt[ends].copy()
        for step in range(1, int(depth.max()) + 1):
            active = depth >= step
            j = ends[active] - step
            residual = x_smooth[active] - x_pred[j + 1]
            x_smooth[active] = x_filt[j] + np.einsum("nij,nj->ni", gains[j], residual)
        return x_smooth[:, 0]


def kalman_smooth(
    series: OffsetSeries,
    config: KalmanConfig | None = None,
    segments: Sequence[tuple[int, int]] | None = None,
) -> OffsetSeries:
    """Smooths a centered offset series with a fixed-lag Kalman smoother.

    Each segment is smoothed independently. Without explicit segments the
    span from the first to the last valid sample is one segment. Samples
    outside every segment come out as NaN; invalid samples inside a segment
    get a prediction-only estimate.

    Args:
        series: Centered offset series
        config: Smoother parameters
        segments: Inclusive ``(first_frame, last_frame)`` ranges, each starting
            and ending on a valid sample

    Returns:
        Series at the smoothed stage with identical length and frame indices
    """
    if series.stage is not SeriesStage.CENTERED:
        raise InvalidConfigError(f"Smoothing expects a centered series, got {series.stage.value}")

    smoother = FixedLagSmoother(config)
    frames = series.frame_indices()
    values = series.values()
    valid = series.valid_mask()
    measurements = np.where(valid, values, np.nan)
    smoothed = np.full(len(series), np.nan)

    if segments is None:
        valid_frames = frames[valid]
        segments = [(int(valid_frames[0]), int(valid_frames[-1]))] if len(valid_frames) else []

    for first, last in segments:
        selected = (frames >= first) & (frames <= last)
        smoothed[selected] = smoother.smooth_segment(frames[selected], measurements[selected])

    logger.debug(
        "Smoothed %d samples in %d segment(s) with lag %d",
        int(np.count_nonzero(np.isfinite(smoothed))),
        len(segments),
        smoother.config.lag,
    )
    return series.with_values(smoothed, SeriesStage.SMOOTHED)
