"""Configuration package for the lane departure tracker.

This package provides centralized configuration including:
- Settings layering (CLI, environment, config file, defaults)
- Mask ingestion and point extraction settings
- Tracking, smoothing and classification parameters
- Evaluation defaults
- Synthetic scenario geometry and artifact names
"""

from .classifier_config import (
    INVERT_DIRECTION,
    MAX_PAIR_DISTANCE,
    MIN_PEAK_DISTANCE,
    MIN_PROMINENCE,
    SHALLOWNESS_GATE,
    SHALLOWNESS_MIN_CHANGES,
    SHALLOWNESS_RATIO,
)
from .evaluation_config import EVENT_MATCH_WINDOW, IOU_THRESHOLDS
from .mask_config import DEFAULT_FPS, KEEP_ROW_EXTREMES, MAX_POINTS
from .output_config import (
    EVENTS_FILENAME,
    MANIFEST_FILENAME,
    OFFSETS_FILENAME,
    REPORT_FILENAME,
    SUMMARY_FILENAME,
    TRAJECTORY_FILENAME,
    TRUTH_EVENTS_FILENAME,
)
from .settings import ENV_PREFIX, SettingsResolver, load_config_file, parse_bool, parse_float_list
from .tracking_config import (
    CENTERING_MODE,
    CENTERING_WINDOW,
    KALMAN_LAG,
    MEASUREMENT_NOISE,
    PROCESS_NOISE,
    TRACKING_WORKERS,
)

__all__ = [
    # Settings layering
    "ENV_PREFIX",
    "SettingsResolver",
    "load_config_file",
    "parse_bool",
    "parse_float_list",
    # Mask Configuration
    "DEFAULT_FPS",
    "MAX_POINTS",
    "KEEP_ROW_EXTREMES",
    # Tracking Configuration
    "KALMAN_LAG",
    "PROCESS_NOISE",
    "MEASUREMENT_NOISE",
    "CENTERING_MODE",
    "CENTERING_WINDOW",
    "TRACKING_WORKERS",
    # Classifier Configuration
    "MIN_PROMINENCE",
    "MIN_PEAK_DISTANCE",
    "MAX_PAIR_DISTANCE",
    "INVERT_DIRECTION",
    "SHALLOWNESS_GATE",
    "SHALLOWNESS_RATIO",
    "SHALLOWNESS_MIN_CHANGES",
    # Evaluation Configuration
    "IOU_THRESHOLDS",
    "EVENT_MATCH_WINDOW",
    # Artifact names
    "OFFSETS_FILENAME",
    "EVENTS_FILENAME",
    "SUMMARY_FILENAME",
    "REPORT_FILENAME",
    "MANIFEST_FILENAME",
    "TRUTH_EVENTS_FILENAME",
    "TRAJECTORY_FILENAME",
]
