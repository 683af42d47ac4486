"""Exception hierarchy for the lane departure tracker.

Every error raised by the pipeline derives from :class:`LaneTrackerError`, which
is itself a ``ValueError`` so callers that only care about bad input can catch
the builtin.
"""

from __future__ import annotations


class LaneTrackerError(ValueError):
    """Base class for all pipeline errors."""


class DegenerateInputError(LaneTrackerError):
    """Geometry input cannot produce a meaningful result (too few or collinear points, zero area)."""


class MaskFormatError(LaneTrackerError):
    """A mask file does not parse as 8-bit PGM."""


class MaskReadError(LaneTrackerError):
    """A mask, ROI or manifest file could not be read from disk."""


class DimensionMismatchError(LaneTrackerError):
    """Two rasters that must share a shape do not."""


class EmptyMaskError(LaneTrackerError):
    """A mask holds no lane pixels."""


class EmptySequenceError(LaneTrackerError):
    """A frame sequence holds no frames."""


class SequenceOrderError(LaneTrackerError):
    """Frame indices are not strictly increasing."""


class NoValidSamplesError(LaneTrackerError):
    """An offset series has no valid sample to work with."""


class UndefinedMetricError(LaneTrackerError):
    """A ratio metric has a zero denominator."""


class FrameMismatchError(LaneTrackerError):
    """Predicted and ground-truth frame sets are not aligned."""


class InvalidScenarioError(LaneTrackerError):
    """A synthetic scenario violates its invariants."""


class InvalidConfigError(LaneTrackerError):
    """A configuration value is outside its documented range."""


class ArtifactFormatError(LaneTrackerError):
    """An artifact file (CSV, JSONL, JSON) could not be parsed."""
