from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np
import numpy.typing as npt

from utils.time_formatting import frame_to_timestamp_ms

from .errors import DimensionMismatchError, InvalidConfigError, SequenceOrderError

Raster = npt.NDArray[np.uint8]
FloatArray = npt.NDArray[np.float64]


def _binarize(pixels: npt.ArrayLike) -> Raster:
    return (np.asarray(pixels) > 0).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class Mask:
    """Binary lane-region raster for one frame (1 = lane, 0 = background)."""

    width: int
    height: int
    pixels: Raster
    frame_index: int = 0
    timestamp_ms: int = 0

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise DimensionMismatchError(f"Mask dimensions must be positive, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width):
            raise DimensionMismatchError(f"Raster shape {self.pixels.shape} does not match {self.width}x{self.height}")
        if self.frame_index < 0:
            raise SequenceOrderError(f"Frame index must be non-negative, got {self.frame_index}")

    @classmethod
    def from_pixels(cls, pixels: npt.ArrayLike, frame_index: int = 0, fps: float | None = None) -> Mask:
        """Build a mask from any numeric raster; values > 0 become lane pixels."""
        raster = _binarize(pixels)
        height, width = raster.shape
        timestamp = frame_to_timestamp_ms(frame_index, fps) if fps else 0
        return cls(width=width, height=height, pixels=raster, frame_index=frame_index, timestamp_ms=timestamp)

    @property
    def lane_pixel_count(self) -> int:
        return int(np.count_nonzero(self.pixels))

    @property
    def is_empty(self) -> bool:
        return self.lane_pixel_count == 0

    def with_pixels(self, pixels: npt.ArrayLike) -> Mask:
        """Same frame metadata, new raster."""
        return replace(self, pixels=_binarize(pixels))


@dataclass(frozen=True, eq=False)
class RoiMask:
    """Static skim mask: 1 keeps a pixel, 0 conceals it."""

    width: int
    height: int
    pixels: Raster

    def __post_init__(self) -> None:
        if self.pixels.shape != (self.height, self.width):
            raise DimensionMismatchError(f"ROI shape {self.pixels.shape} does not match {self.width}x{self.height}")

    @classmethod
    def from_mask(cls, mask: Mask) -> RoiMask:
        return cls(width=mask.width, height=mask.height, pixels=mask.pixels)


@dataclass(frozen=True)
class FrameEntry:
    frame_index: int
    path: Path


@dataclass(frozen=True)
class SequenceManifest:
    """Ordered list of mask files making up one clip."""

    fps: float
    width: int
    height: int
    entries: tuple[FrameEntry, ...] = ()

    def __post_init__(self) -> None:
        if not self.fps > 0:
            raise InvalidConfigError(f"fps must be positive, got {self.fps}")
        if self.width <= 0 or self.height <= 0:
            raise DimensionMismatchError(f"Manifest dimensions must be positive, got {self.width}x{self.height}")
        indices = [entry.frame_index for entry in self.entries]
        if any(b <= a for a, b in zip(indices, indices[1:], strict=False)):
            raise SequenceOrderError("Manifest frame indices must be strictly increasing")
        if indices and indices[0] < 0:
            raise SequenceOrderError(f"Frame index must be non-negative, got {indices[0]}")

    def __len__(self) -> int:
        return len(self.entries)


class SeriesStage(Enum):
    RAW = "raw"
    CENTERED = "centered"
    SMOOTHED = "smoothed"


_STAGE_ORDER = [SeriesStage.RAW, SeriesStage.CENTERED, SeriesStage.SMOOTHED]


@dataclass(frozen=True)
class OffsetSample:
    """Offsets of one frame's hull centroid.

    ``vertical_offset`` is signed (centroid x minus image centre line x);
    ``horizontal_offset`` is the distance to the bottom edge of the frame.
    Both are NaN when ``valid`` is false.
    """

    frame_index: int
    vertical_offset: float
    horizontal_offset: float
    valid: bool


@dataclass(frozen=True)
class OffsetSeries:
    samples: tuple[OffsetSample, ...]
    stage: SeriesStage = SeriesStage.RAW
    fps: float = 25.0

    def __post_init__(self) -> None:
        frames = [s.frame_index for s in self.samples]
        if any(b <= a for a, b in zip(frames, frames[1:], strict=False)):
            raise SequenceOrderError("Offset series frame indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.samples)

    def values(self) -> FloatArray:
        return np.array([s.vertical_offset for s in self.samples], dtype=np.float64)

    def horizontal_values(self) -> FloatArray:
        return np.array([s.horizontal_offset for s in self.samples], dtype=np.float64)

    def valid_mask(self) -> npt.NDArray[np.bool_]:
        return np.array([s.valid for s in self.samples], dtype=bool)

    def frame_indices(self) -> npt.NDArray[np.int64]:
        return np.array([s.frame_index for s in self.samples], dtype=np.int64)

    @property
    def valid_count(self) -> int:
        return sum(1 for s in self.samples if s.valid)

    def with_values(self, values: npt.ArrayLike, stage: SeriesStage) -> OffsetSeries:
        """Return a copy carrying new vertical offsets at ``stage``.

        Stages only move forward one step at a time (raw -> centered -> smoothed);
        staying at the same stage is allowed.
        """
        current = _STAGE_ORDER.index(self.stage)
        target = _STAGE_ORDER.index(stage)
        if target not in (current, current + 1):
            raise InvalidConfigError(f"Cannot move an offset series from {self.stage.value} to {stage.value}")
        new_values = np.asarray(values, dtype=np.float64)
        if new_values.shape != (len(self.samples),):
            raise DimensionMismatchError(f"Expected {len(self.samples)} values, got shape {new_values.shape}")
        samples = tuple(replace(s, vertical_offset=float(v)) for s, v in zip(self.samples, new_values, strict=True))
        return OffsetSeries(samples=samples, stage=stage, fps=self.fps)


@dataclass
class TrackingResult:
    """All three stages of one clip's offset series, plus segment bounds."""

    raw: OffsetSeries
    centered: OffsetSeries
    smoothed: OffsetSeries
    segments: list[tuple[int, int]] = field(default_factory=list)
