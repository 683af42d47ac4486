from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import ArtifactFormatError, InvalidConfigError


class ExtremumKind(Enum):
    PEAK = "peak"
    TROUGH = "trough"

    @property
    def opposite(self) -> ExtremumKind:
        return ExtremumKind.TROUGH if self is ExtremumKind.PEAK else ExtremumKind.PEAK


class EventKind(Enum):
    CHANGE = "change"
    INCURSION = "incursion"


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"
    NONE = "none"

    @property
    def mirrored(self) -> Direction:
        if self is Direction.LEFT:
            return Direction.RIGHT
        if self is Direction.RIGHT:
            return Direction.LEFT
        return Direction.NONE


@dataclass(frozen=True)
class Extremum:
    """A local maximum (peak) or minimum (trough) of a centered, smoothed series."""

    frame_index: int
    amplitude: float
    kind: ExtremumKind
    prominence: float = 0.0
    segment: int = 0

    def __post_init__(self) -> None:
        if self.kind is ExtremumKind.PEAK and not self.amplitude > 0:
            raise InvalidConfigError(f"Peak amplitude must be positive, got {self.amplitude}")
        if self.kind is ExtremumKind.TROUGH and not self.amplitude < 0:
            raise InvalidConfigError(f"Trough amplitude must be negative, got {self.amplitude}")


@dataclass(frozen=True)
class LaneEvent:
    """A classified lane change or incursion.

    ``peak_frames`` and ``amplitudes`` list the participating extrema in
    temporal order; the second slot is ``None`` for incursions.
    """

    kind: EventKind
    direction: Direction
    frame_index: int
    timestamp_ms: int
    peak_frames: tuple[int, int | None]
    amplitudes: tuple[float, float | None]

    def __post_init__(self) -> None:
        if self.kind is EventKind.CHANGE:
            if self.direction is Direction.NONE:
                raise InvalidConfigError("A lane change needs a direction")
            if self.peak_frames[1] is None or self.amplitudes[1] is None:
                raise InvalidConfigError("A lane change needs two extrema")
        elif self.peak_frames[1] is not None or self.amplitudes[1] is not None:
            raise InvalidConfigError("An incursion has exactly one extremum")

    def mirrored(self) -> LaneEvent:
        """Same event seen in a horizontally flipped clip."""
        second = self.amplitudes[1]
        return LaneEvent(
            kind=self.kind,
            direction=self.direction.mirrored,
            frame_index=self.frame_index,
            timestamp_ms=self.timestamp_ms,
            peak_frames=self.peak_frames,
            amplitudes=(-self.amplitudes[0], None if second is None else -second),
        )

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "direction": self.direction.value,
            "frame_index": self.frame_index,
            "timestamp_ms": self.timestamp_ms,
            "peak_frames": list(self.peak_frames),
            "amplitudes": [None if a is None else round(a, 6) for a in self.amplitudes],
        }

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> LaneEvent:
        try:
            peak_frames = record["peak_frames"]
            amplitudes = record["amplitudes"]
            return cls(
                kind=EventKind(record["kind"]),
                direction=Direction(record["direction"]),
                frame_index=int(record["frame_index"]),
                timestamp_ms=int(record["timestamp_ms"]),
                peak_frames=(int(peak_frames[0]), None if peak_frames[1] is None else int(peak_frames[1])),
                amplitudes=(float(amplitudes[0]), None if amplitudes[1] is None else float(amplitudes[1])),
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ArtifactFormatError(f"Malformed event record {record!r}: {exc}") from exc


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise InvalidConfigError(f"Confusion counts must be non-negative, got {self}")

    def __add__(self, other: ConfusionCounts) -> ConfusionCounts:
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn)

    @property
    def crossings(self) -> int:
        """Number of ground-truth events (TP + FN)."""
        return self.tp + self.fn
