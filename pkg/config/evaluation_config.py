"""Centralized configuration for the evaluation harness."""

# ---------------------------------------------------------------------------
# Mask Metrics
# ---------------------------------------------------------------------------
IOU_THRESHOLDS: tuple[float, ...] = (0.5,)

# ---------------------------------------------------------------------------
# Event Metrics
# ---------------------------------------------------------------------------
EVENT_MATCH_WINDOW: int = 50  # frames (2 s at 25 fps)
