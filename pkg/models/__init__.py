"""Models package for the lane departure tracker.

This package provides the core domain models:
- Geometry: points, lines and convex polygons
- Core: masks, manifests and offset series
- Events: extrema, lane events and confusion counts
- Settings: per-stage configuration objects
- Scenario: synthetic clip scripts
"""

from .core import (
    FrameEntry,
    Mask,
    OffsetSample,
    OffsetSeries,
    RoiMask,
    SequenceManifest,
    SeriesStage,
    TrackingResult,
)
from .events import ConfusionCounts, Direction, EventKind, Extremum, ExtremumKind, LaneEvent
from .geometry import ConvexPolygon, Line2D, Point2D, PointArray
from .scenario import Maneuver, NoiseProfile, Scenario
from .settings import CenteringMode, EvalConfig, EvalRunConfig, KalmanConfig, PeakConfig, RunConfig

__all__ = [
    # Geometry
    "Point2D",
    "Line2D",
    "ConvexPolygon",
    "PointArray",
    # Masks and series
    "Mask",
    "RoiMask",
    "FrameEntry",
    "SequenceManifest",
    "SeriesStage",
    "OffsetSample",
    "OffsetSeries",
    "TrackingResult",
    # Events
    "ExtremumKind",
    "Extremum",
    "EventKind",
    "Direction",
    "LaneEvent",
    "ConfusionCounts",
    # Settings
    "CenteringMode",
    "KalmanConfig",
    "PeakConfig",
    "EvalConfig",
    "RunConfig",
    "EvalRunConfig",
    # Scenario
    "Maneuver",
    "NoiseProfile",
    "Scenario",
]
