"""Centralized configuration for offset tracking and smoothing.

This module contains all settings related to centering the offset
series and the fixed-lag Kalman smoother.
"""

# ---------------------------------------------------------------------------
# Fixed-Lag Kalman Smoother (constant-velocity model)
# ---------------------------------------------------------------------------
KALMAN_LAG: int = 15  # Frames of look-ahead (~0.6 s at 25 fps)
PROCESS_NOISE: float = 0.5  # px^2/frame^2, white acceleration density
MEASUREMENT_NOISE: float = 9.0  # px^2, per-frame centroid jitter
INITIAL_VELOCITY_VARIANCE: float = 100.0  # px^2/frame^2, prior on offset rate

# ---------------------------------------------------------------------------
# Centering
# ---------------------------------------------------------------------------
CENTERING_MODE: str = "global"  # "global" or "window"
CENTERING_WINDOW: int = 1500  # Frames in the sliding mean window (60 s at 25 fps)

# ---------------------------------------------------------------------------
# Frame Processing
# ---------------------------------------------------------------------------
TRACKING_WORKERS: int = 1  # Threads used for per-frame hull extraction
