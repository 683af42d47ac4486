"""Artifact file names written and read by the CLI."""

# ---------------------------------------------------------------------------
# Pipeline Artifacts
# ---------------------------------------------------------------------------
OFFSETS_FILENAME: str = "offsets.csv"
EVENTS_FILENAME: str = "events.jsonl"
SUMMARY_FILENAME: str = "summary.json"
REPORT_FILENAME: str = "report.json"

# ---------------------------------------------------------------------------
# Synthetic Clip Artifacts
# ---------------------------------------------------------------------------
MANIFEST_FILENAME: str = "manifest.csv"
TRUTH_EVENTS_FILENAME: str = "truth_events.jsonl"
TRAJECTORY_FILENAME: str = "trajectory.csv"
SUITE_INDEX_FILENAME: str = "suite.csv"
FRAME_FILENAME_TEMPLATE: str = "frame_{frame_index:06d}.pgm"

# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------
FLOAT_DECIMALS: int = 6  # Fixed precision keeps reruns byte-identical
