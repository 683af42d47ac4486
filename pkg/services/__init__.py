"""Services package for the lane departure tracker.

This package provides the core pipeline services:
- Mask preparation: ROI skimming, point extraction and hull coverage
- Tracking: raw offsets, centering and segment splitting
- Smoothing: fixed-lag Kalman smoother
- Classification: peak detection and lane change/incursion events
- Evaluation: IoU, mAP, event matching and reports
- Synthesis: ground-truth clips for scripted maneuvers
"""

from .evaluation import (
    EventTally,
    build_report,
    iou,
    jaccard_ratio,
    map_score,
    mask_confusion,
    match_events,
    parse_counts,
    precision,
    report_from_counts,
    sensitivity,
)
from .event_classification import EventClassifier, classify_events, detect_peaks, mirror_series
from .kalman_smoothing import FixedLagSmoother, kalman_smooth
from .mask_preparation import apply_roi, extract_hull, hull_coverage, mask_to_points
from .offset_tracking import OffsetTracker, center_series, compute_offsets, frame_offset, split_segments, track_clip
from .scenario_synthesis import (
    SuiteEntry,
    SyntheticClip,
    build_suite,
    generate,
    parse_maneuvers,
    render_scenario,
    scenario_from_values,
    write_clip,
    write_suite,
)

__all__ = [
    # Mask preparation
    "apply_roi",
    "mask_to_points",
    "extract_hull",
    "hull_coverage",
    # Tracking
    "frame_offset",
    "compute_offsets",
    "center_series",
    "split_segments",
    "kalman_smooth",
    "FixedLagSmoother",
    "OffsetTracker",
    "track_clip",
    # Classification
    "mirror_series",
    "detect_peaks",
    "classify_events",
    "EventClassifier",
    # Evaluation
    "iou",
    "mask_confusion",
    "jaccard_ratio",
    "map_score",
    "match_events",
    "sensitivity",
    "precision",
    "parse_counts",
    "EventTally",
    "build_report",
    "report_from_counts",
    # Synthesis
    "SyntheticClip",
    "SuiteEntry",
    "render_scenario",
    "write_clip",
    "generate",
    "parse_maneuvers",
    "scenario_from_values",
    "build_suite",
    "write_suite",
]
