"""Centralized configuration for synthetic scenario rendering.

This module contains the frame geometry and maneuver defaults used to
render ground-truth mask sequences.
"""

# ---------------------------------------------------------------------------
# Frame Geometry
# ---------------------------------------------------------------------------
DEFAULT_FRAME_WIDTH: int = 752
DEFAULT_FRAME_HEIGHT: int = 480
DEFAULT_CLIP_FRAMES: int = 500

# ---------------------------------------------------------------------------
# Lane Trapezoid (fractions of the frame)
# ---------------------------------------------------------------------------
TRAPEZOID_BOTTOM_WIDTH: float = 0.40
TRAPEZOID_TOP_WIDTH: float = 0.10
TRAPEZOID_HEIGHT: float = 0.45
COORDINATE_GRID: int = 256  # Corners snap to 1/256 px so rasters do not depend on libm rounding

# ---------------------------------------------------------------------------
# Maneuver Defaults
# ---------------------------------------------------------------------------
DEFAULT_MANEUVER_FRAMES: int = 60  # 2.4 s at 25 fps
DEFAULT_LATERAL_AMPLITUDE: float = 80.0  # px

# ---------------------------------------------------------------------------
# Suite Generation
# ---------------------------------------------------------------------------
SUITE_KINDS: tuple[str, ...] = ("lane_keep", "left_change", "right_change", "incursion")
SUITE_JITTER_SIGMA: float = 2.0
SUITE_DROPOUT_PROBABILITY: float = 0.01
SUITE_MARGIN_FRAMES: int = 100  # Keep maneuvers this far from both clip ends
