"""Centralized configuration for mask ingestion.

This module contains all settings related to reading lane masks,
applying the ROI skim mask and reducing masks to point sets.
"""

# ---------------------------------------------------------------------------
# PGM Format
# ---------------------------------------------------------------------------
PGM_MAXVAL: int = 255  # Maximum sample value accepted (8-bit only)
PGM_LANE_VALUE: int = 255  # Value written for lane pixels
PGM_BINARY_MAGIC: bytes = b"P5"
PGM_ASCII_MAGIC: bytes = b"P2"

# ---------------------------------------------------------------------------
# Point Extraction
# ---------------------------------------------------------------------------
MAX_POINTS: int = 4096  # Upper bound on hull input size
KEEP_ROW_EXTREMES: bool = True  # Always keep each row's outermost lane pixels when tracking

# ---------------------------------------------------------------------------
# Timing
# ---------------------------------------------------------------------------
DEFAULT_FPS: float = 25.0  # Average frame rate of the recordings
