"""Typed configuration objects for each pipeline stage."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from config.classifier_config import (
    INVERT_DIRECTION,
    MAX_PAIR_DISTANCE,
    MIN_PEAK_DISTANCE,
    MIN_PROMINENCE,
    SHALLOWNESS_GATE,
    SHALLOWNESS_MIN_CHANGES,
    SHALLOWNESS_RATIO,
)
from config.evaluation_config import EVENT_MATCH_WINDOW, IOU_THRESHOLDS
from config.mask_config import KEEP_ROW_EXTREMES, MAX_POINTS
from config.tracking_config import (
    CENTERING_MODE,
    CENTERING_WINDOW,
    INITIAL_VELOCITY_VARIANCE,
    KALMAN_LAG,
    MEASUREMENT_NOISE,
    PROCESS_NOISE,
    TRACKING_WORKERS,
)

from .errors import InvalidConfigError


class CenteringMode(Enum):
    GLOBAL = "global"
    WINDOW = "window"


@dataclass(frozen=True)
class KalmanConfig:
    """Constant-velocity fixed-lag smoother parameters.

    ``process_noise`` is the white-acceleration spectral density in
    px^2/frame^2 and ``measurement_noise`` the offset variance in px^2.
    """

    lag: int = KALMAN_LAG
    process_noise: float = PROCESS_NOISE
    measurement_noise: float = MEASUREMENT_NOISE
    initial_velocity_variance: float = INITIAL_VELOCITY_VARIANCE

    def __post_init__(self) -> None:
        if self.lag < 1:
            raise InvalidConfigError(f"Kalman lag must be >= 1 frame, got {self.lag}")
        if not (self.process_noise > 0 and self.measurement_noise > 0):
            raise InvalidConfigError("Kalman noise parameters must be positive")
        if not self.initial_velocity_variance > 0:
            raise InvalidConfigError("Initial velocity variance must be positive")


@dataclass(frozen=True)
class PeakConfig:
    min_prominence: float = MIN_PROMINENCE
    min_peak_distance: int = MIN_PEAK_DISTANCE
    max_pair_distance: int = MAX_PAIR_DISTANCE
    invert_direction: bool = INVERT_DIRECTION
    shallowness_gate: bool = SHALLOWNESS_GATE
    shallowness_ratio: float = SHALLOWNESS_RATIO
    shallowness_min_changes: int = SHALLOWNESS_MIN_CHANGES

    def __post_init__(self) -> None:
        if not (self.min_prominence > 0 and self.min_peak_distance > 0 and self.max_pair_distance > 0):
            raise InvalidConfigError("Peak detection parameters must all be positive")
        if not self.shallowness_ratio > 0:
            raise InvalidConfigError(f"Shallowness ratio must be positive, got {self.shallowness_ratio}")


@dataclass(frozen=True)
class EvalConfig:
    iou_thresholds: tuple[float, ...] = IOU_THRESHOLDS
    event_match_window: int = EVENT_MATCH_WINDOW

    def __post_init__(self) -> None:
        thresholds = self.iou_thresholds
        if not thresholds:
            raise InvalidConfigError("At least one IoU threshold is required")
        if any(not 0 < t <= 1 for t in thresholds):
            raise InvalidConfigError(f"IoU thresholds must lie in (0, 1], got {thresholds}")
        if list(thresholds) != sorted(set(thresholds)):
            raise InvalidConfigError(f"IoU thresholds must be sorted and unique, got {thresholds}")
        if self.event_match_window < 0:
            raise InvalidConfigError(f"Event match window must be >= 0, got {self.event_match_window}")


@dataclass(frozen=True)
class RunConfig:
    """Everything ``run`` needs: inputs, outputs and stage parameters."""

    manifest_path: Path
    output_dir: Path
    roi_path: Path | None = None
    kalman: KalmanConfig = field(default_factory=KalmanConfig)
    peaks: PeakConfig = field(default_factory=PeakConfig)
    max_points: int = MAX_POINTS
    keep_row_extremes: bool = KEEP_ROW_EXTREMES
    centering: CenteringMode = CenteringMode(CENTERING_MODE)
    centering_window: int = CENTERING_WINDOW
    workers: int = TRACKING_WORKERS

    def __post_init__(self) -> None:
        if self.max_points < 3:
            raise InvalidConfigError(f"max_points must be >= 3, got {self.max_points}")
        if self.centering_window < 1:
            raise InvalidConfigError(f"Centering window must be >= 1 frame, got {self.centering_window}")
        if self.workers < 1:
            raise InvalidConfigError(f"Worker count must be >= 1, got {self.workers}")

    def describe(self) -> dict[str, Any]:
        """JSON-ready view of the effective parameters (paths excluded)."""
        return {
            "kalman": asdict(self.kalman),
            "peaks": asdict(self.peaks),
            "max_points": self.max_points,
            "keep_row_extremes": self.keep_row_extremes,
            "centering": self.centering.value,
            "centering_window": self.centering_window,
        }


@dataclass(frozen=True)
class EvalRunConfig:
    """Inputs of ``eval``: paired per-clip event logs, optional masks or a counts file."""

    output_path: Path
    pred_events: tuple[Path, ...] = ()
    truth_events: tuple[Path, ...] = ()
    pred_manifest: Path | None = None
    truth_manifest: Path | None = None
    counts_path: Path | None = None
    evaluation: EvalConfig = field(default_factory=EvalConfig)

    def __post_init__(self) -> None:
        if len(self.pred_events) != len(self.truth_events):
            raise InvalidConfigError("Every --pred-events needs a matching --truth-events")
        if (self.pred_manifest is None) != (self.truth_manifest is None):
            raise InvalidConfigError("Mask evaluation needs both --pred-manifest and --truth-manifest")
        if self.counts_path is None and not self.pred_events and self.pred_manifest is None:
            raise InvalidConfigError("Nothing to evaluate: give event logs, manifests or a counts file")
