from __future__ import annotations

from dataclasses import dataclass, field, replace

from config.mask_config import DEFAULT_FPS
from config.synthesis_config import (
    DEFAULT_CLIP_FRAMES,
    DEFAULT_FRAME_HEIGHT,
    DEFAULT_FRAME_WIDTH,
)

from .errors import InvalidScenarioError
from .events import Direction, EventKind


@dataclass(frozen=True)
class Maneuver:
    """One scripted lateral maneuver: a lane change or an incursion."""

    kind: EventKind
    direction: Direction
    start_frame: int
    duration_frames: int
    lateral_amplitude: float

    def __post_init__(self) -> None:
        if self.direction is Direction.NONE:
            raise InvalidScenarioError("A maneuver needs a left or right direction")
        if self.start_frame < 0 or self.duration_frames < 2:
            raise InvalidScenarioError(f"Invalid maneuver timing: start {self.start_frame}, duration {self.duration_frames}")
        if not self.lateral_amplitude > 0:
            raise InvalidScenarioError(f"Maneuver amplitude must be positive, got {self.lateral_amplitude}")

    @property
    def end_frame(self) -> int:
        """First frame after the maneuver."""
        return self.start_frame + self.duration_frames


@dataclass(frozen=True)
class NoiseProfile:
    jitter_sigma: float = 0.0  # px, Gaussian noise on trapezoid corners
    dropout_probability: float = 0.0  # per frame
    speckle_probability: float = 0.0  # per pixel

    def __post_init__(self) -> None:
        if self.jitter_sigma < 0:
            raise InvalidScenarioError(f"Jitter sigma must be >= 0, got {self.jitter_sigma}")
        for name in ("dropout_probability", "speckle_probability"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise InvalidScenarioError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class Scenario:
    """Script for one synthetic clip."""

    width: int = DEFAULT_FRAME_WIDTH
    height: int = DEFAULT_FRAME_HEIGHT
    fps: float = DEFAULT_FPS
    duration_frames: int = DEFAULT_CLIP_FRAMES
    maneuvers: tuple[Maneuver, ...] = ()
    noise: NoiseProfile = field(default_factory=NoiseProfile)
    mount_bias: float = 0.0  # px, camera mounted off the lane centre
    mirror: bool = False

    def __post_init__(self) -> None:
        if self.width < 8 or self.height < 8:
            raise InvalidScenarioError(f"Frame too small: {self.width}x{self.height}")
        if not self.fps > 0:
            raise InvalidScenarioError(f"fps must be positive, got {self.fps}")
        if self.duration_frames < 1:
            raise InvalidScenarioError(f"Clip needs at least one frame, got {self.duration_frames}")
        ordered = sorted(self.maneuvers, key=lambda m: m.start_frame)
        for first, second in zip(ordered, ordered[1:], strict=False):
            if second.start_frame < first.end_frame:
                raise InvalidScenarioError(f"Maneuvers overlap at frame {second.start_frame}")
        if ordered and ordered[-1].end_frame > self.duration_frames:
            raise InvalidScenarioError(f"Maneuver ends at frame {ordered[-1].end_frame}, past the clip end {self.duration_frames}")
        object.__setattr__(self, "maneuvers", tuple(ordered))

    def mirrored(self) -> Scenario:
        return replace(self, mirror=not self.mirror)
