"""Centralized configuration for peak detection and event classification."""

# ---------------------------------------------------------------------------
# Peak Detection
# ---------------------------------------------------------------------------
MIN_PROMINENCE: float = 10.0  # px
MIN_PEAK_DISTANCE: int = 12  # frames between extrema of the same kind
MAX_PAIR_DISTANCE: int = 75  # frames between a peak and its depression zone (3 s at 25 fps)

# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------
INVERT_DIRECTION: bool = False  # Swap the left/right sign convention

# Incursions must be shallower than changes in the same clip
SHALLOWNESS_GATE: bool = True
SHALLOWNESS_RATIO: float = 0.6  # Fraction of the median change amplitude
SHALLOWNESS_MIN_CHANGES: int = 2  # Changes needed before the ceiling applies
