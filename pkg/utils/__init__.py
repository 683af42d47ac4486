"""Utilities package for the lane departure tracker.

This package provides common utilities including:
- Logging configuration
- Frame/time conversion
- 2D geometry (convex hull, centroid, point/line distances)
"""

from .geometry import (
    as_point_array,
    point_in_convex_polygon,
    point_line_distance,
    points_in_convex_polygon,
    polygon_area,
    polygon_centroid,
    quickhull,
    signed_center_offset,
)
from .logger import logger
from .time_formatting import frame_to_timestamp_ms, frames_to_seconds

__all__ = [
    # Logging
    "logger",
    # Time utilities
    "frame_to_timestamp_ms",
    "frames_to_seconds",
    # Geometry
    "as_point_array",
    "quickhull",
    "polygon_area",
    "polygon_centroid",
    "point_line_distance",
    "signed_center_offset",
    "points_in_convex_polygon",
    "point_in_convex_polygon",
]
