"""Synthetic lane-mask clips with known maneuvers, used as a ground-truth oracle.

The lane region is a trapezoid (wide at the bottom, narrow at the top) whose
centre follows a scripted lateral trajectory. A lane change ramps the
trapezoid across the frame, re-anchors it in the new lane and ramps it back
to the centre, producing the peak-then-depression offset pattern; an
incursion moves half-way out and back with no re-anchor.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt

from clients import ArtifactStore, MaskStore
from config.mask_config import DEFAULT_FPS
from config.output_config import (
    FRAME_FILENAME_TEMPLATE,
    MANIFEST_FILENAME,
    SUITE_INDEX_FILENAME,
    TRAJECTORY_FILENAME,
    TRUTH_EVENTS_FILENAME,
)
from config.settings import parse_bool
from config.synthesis_config import (
    COORDINATE_GRID,
    DEFAULT_CLIP_FRAMES,
    DEFAULT_FRAME_HEIGHT,
    DEFAULT_FRAME_WIDTH,
    DEFAULT_LATERAL_AMPLITUDE,
    DEFAULT_MANEUVER_FRAMES,
    SUITE_DROPOUT_PROBABILITY,
    SUITE_JITTER_SIGMA,
    SUITE_KINDS,
    SUITE_MARGIN_FRAMES,
    TRAPEZOID_BOTTOM_WIDTH,
    TRAPEZOID_HEIGHT,
    TRAPEZOID_TOP_WIDTH,
)
from models import (
    Direction,
    EventKind,
    FrameEntry,
    LaneEvent,
    Maneuver,
    Mask,
    NoiseProfile,
    Scenario,
    SequenceManifest,
)
from models.errors import InvalidScenarioError
from utils import frame_to_timestamp_ms, logger

FloatArray = npt.NDArray[np.float64]


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------
def maneuver_displacement(maneuver: Maneuver, frames: npt.NDArray[np.int64]) -> FloatArray:
    """Lateral displacement of the lane centre caused by one maneuver, in pixels.

    Positive values move the lane region right in the image, which is what
    a vehicle drifting left sees.
    """
    sign = 1.0 if maneuver.direction is Direction.LEFT else -1.0
    amplitude = maneuver.lateral_amplitude
    u = (frames - maneuver.start_frame) / maneuver.duration_frames
    active = (u >= 0) & (u < 1)
    displacement = np.zeros(len(frames))

    if maneuver.kind is EventKind.CHANGE:
        first_half = active & (u < 0.5)
        second_half = active & (u >= 0.5)
        displacement[first_half] = amplitude * (1 - np.cos(np.pi * 2 * u[first_half])) / 2
        # Re-anchored in the new lane, then back to the centre
        displacement[second_half] = -amplitude * (1 + np.cos(np.pi * (2 * u[second_half] - 1))) / 2
    else:
        displacement[active] = (amplitude / 2) * (1 - np.cos(2 * np.pi * u[active])) / 2
    return sign * displacement


def truth_event(maneuver: Maneuver, fps: float) -> LaneEvent:
    """Ground-truth event of a maneuver, anchored at its start frame."""
    sign = 1.0 if maneuver.direction is Direction.LEFT else -1.0
    start, middle = maneuver.start_frame, maneuver.start_frame + maneuver.duration_frames // 2
    amplitude = maneuver.lateral_amplitude
    if maneuver.kind is EventKind.CHANGE:
        peak_frames: tuple[int, int | None] = (middle - 1, middle)
        amplitudes: tuple[float, float | None] = (sign * amplitude, -sign * amplitude)
    else:
        peak_frames = (middle, None)
        amplitudes = (sign * amplitude / 2, None)
    return LaneEvent(
        kind=maneuver.kind,
        direction=maneuver.direction,
        frame_index=start,
        timestamp_ms=frame_to_timestamp_ms(start, fps),
        peak_frames=peak_frames,
        amplitudes=amplitudes,
    )


def _snap(values: FloatArray) -> FloatArray:
    """Quantize coordinates to the 1/COORDINATE_GRID px grid."""
    return np.round(values * COORDINATE_GRID) / COORDINATE_GRID


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------
@dataclass
class SyntheticClip:
    """A rendered scenario: per-frame trapezoid corners plus ground truth.

    Frames are rasterized on demand so long clips never sit in memory at once.
    """

    scenario: Scenario
    seed: int
    frame_indices: npt.NDArray[np.int64]
    lateral_offsets: FloatArray  # lane centre minus width / 2, mirror applied
    corners: FloatArray  # (frames, 4): bottom-left, bottom-right, top-left, top-right x
    dropped: npt.NDArray[np.bool_]
    speckle_seeds: npt.NDArray[np.int64] | None
    truth_events: list[LaneEvent] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.frame_indices)

    @property
    def top_row(self) -> int:
        return self.scenario.height - round(TRAPEZOID_HEIGHT * self.scenario.height)

    def raster(self, position: int) -> npt.NDArray[np.uint8]:
        """Rasterize the frame at ``position`` (0-based within the clip)."""
        width, height = self.scenario.width, self.scenario.height
        pixels = np.zeros((height, width), dtype=np.uint8)
        if not self.dropped[position]:
            bottom_left, bottom_right, top_left, top_right = self.corners[position]
            rows = np.arange(self.top_row, height)
            # 0 at the top row, 1 at the bottom row
            t = (rows - self.top_row) / max(height - 1 - self.top_row, 1)
            left = top_left + (bottom_left - top_left) * t
            right = top_right + (bottom_right - top_right) * t
            columns = np.arange(width)
            pixels[self.top_row :] = (columns >= left[:, None]) & (columns <= right[:, None])

        if self.speckle_seeds is not None:
            rng = np.random.default_rng(int(self.speckle_seeds[position]))
            flips = rng.random((height, width)) < self.scenario.noise.speckle_probability
            pixels ^= flips.astype(np.uint8)

        if self.scenario.mirror:
            pixels = np.ascontiguousarray(np.fliplr(pixels))
        return pixels

    def mask(self, position: int) -> Mask:
        frame_index = int(self.frame_indices[position])
        return Mask.from_pixels(self.raster(position), frame_index=frame_index, fps=self.scenario.fps)

    def iter_masks(self) -> Iterator[Mask]:
        for position in range(len(self)):
            yield self.mask(position)


def render_scenario(scenario: Scenario, seed: int = 0) -> SyntheticClip:
    """Lays out a scenario's per-frame geometry and ground truth.

    Random draws come from ``numpy.random.default_rng(seed)`` in a fixed
    order (corner jitter, then dropout, then per-frame speckle seeds), so the
    same scenario and seed always give byte-identical frames.

    Raises:
        InvalidScenarioError: If the lane region never fits the frame
    """
    width = scenario.width
    frames = np.arange(scenario.duration_frames, dtype=np.int64)

    displacement = np.zeros(len(frames))
    for maneuver in scenario.maneuvers:
        displacement += maneuver_displacement(maneuver, frames)
    centre = (width - 1) / 2 + scenario.mount_bias + displacement

    half_bottom = TRAPEZOID_BOTTOM_WIDTH * width / 2
    half_top = TRAPEZOID_TOP_WIDTH * width / 2
    if np.all(centre + half_bottom < 0) or np.all(centre - half_bottom > width - 1):
        raise InvalidScenarioError("Lane region lies entirely outside the frame")

    rng = np.random.default_rng(seed)
    jitter = rng.normal(0.0, scenario.noise.jitter_sigma, size=(len(frames), 4))
    dropped = rng.random(len(frames)) < scenario.noise.dropout_probability
    speckle_seeds = (
        rng.integers(0, np.iinfo(np.int64).max, size=len(frames))
        if scenario.noise.speckle_probability > 0
        else None
    )

    offsets = np.array([-half_bottom, half_bottom, -half_top, half_top])
    corners = _snap(centre[:, None] + offsets[None, :] + jitter)

    lateral = centre - width / 2
    truth = [truth_event(m, scenario.fps) for m in scenario.maneuvers]
    if scenario.mirror:
        # Flipping column i to width - 1 - i maps a centre c to width - 1 - c
        lateral = -lateral - 1
        truth = [event.mirrored() for event in truth]

    return SyntheticClip(
        scenario=scenario,
        seed=seed,
        frame_indices=frames,
        lateral_offsets=lateral,
        corners=corners,
        dropped=dropped,
        speckle_seeds=speckle_seeds,
        truth_events=truth,
    )


def write_clip(clip: SyntheticClip, output_dir: Path, mask_store: MaskStore | None = None) -> Path:
    """Write frames, manifest, truth log and trajectory; returns the manifest path."""
    output_dir = Path(output_dir)
    store = mask_store or MaskStore(fps=clip.scenario.fps)
    artifacts = ArtifactStore(output_dir)

    entries = []
    for position, frame_index in enumerate(clip.frame_indices):
        path = output_dir / FRAME_FILENAME_TEMPLATE.format(frame_index=int(frame_index))
        store.save_mask(clip.mask(position), path)
        entries.append(FrameEntry(int(frame_index), path))

    manifest = SequenceManifest(
        fps=clip.scenario.fps,
        width=clip.scenario.width,
        height=clip.scenario.height,
        entries=tuple(entries),
    )
    # Manifest goes last so a readable manifest implies complete frames
    manifest_path = store.write_manifest(manifest, output_dir / MANIFEST_FILENAME)
    artifacts.write_events(clip.truth_events, TRUTH_EVENTS_FILENAME)
    artifacts.write_trajectory(clip.frame_indices.tolist(), clip.lateral_offsets.tolist(), TRAJECTORY_FILENAME)

    logger.info(
        "  🎬 Wrote %d frames (%d dropped) and %d truth event(s) to %s",
        len(clip),
        int(clip.dropped.sum()),
        len(clip.truth_events),
        output_dir,
    )
    return manifest_path


def generate(scenario: Scenario, seed: int, output_dir: Path) -> Path:
    """Renders a scenario to disk; returns the manifest path."""
    return write_clip(render_scenario(scenario, seed), output_dir)


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------
def parse_maneuvers(raw: str) -> tuple[Maneuver, ...]:
    """Parse ``"change:left:200:60:80;incursion:right:350"``.

    Each item is ``kind:direction:start[:duration[:amplitude]]``; missing
    duration and amplitude take the configured defaults.
    """
    maneuvers = []
    for item in filter(None, (part.strip() for part in raw.split(";"))):
        fields = [f.strip() for f in item.split(":")]
        if not 3 <= len(fields) <= 5:
            raise InvalidScenarioError(f"Maneuver {item!r} must be kind:direction:start[:duration[:amplitude]]")
        try:
            maneuvers.append(
                Maneuver(
                    kind=EventKind(fields[0].lower()),
                    direction=Direction(fields[1].lower()),
                    start_frame=int(fields[2]),
                    duration_frames=int(fields[3]) if len(fields) > 3 else DEFAULT_MANEUVER_FRAMES,
                    lateral_amplitude=float(fields[4]) if len(fields) > 4 else DEFAULT_LATERAL_AMPLITUDE,
                )
            )
        except InvalidScenarioError:
            raise
        except ValueError as e:
            raise InvalidScenarioError(f"Invalid maneuver {item!r}: {e}") from e
    return tuple(maneuvers)


def scenario_from_values(values: Mapping[str, str]) -> Scenario:
    """Build a scenario from flat ``KEY=VALUE`` settings (keys upper-case, no prefix).

    Recognized keys: WIDTH, HEIGHT, FPS, FRAMES, MANEUVERS, JITTER, DROPOUT,
    SPECKLE, MOUNT_BIAS, MIRROR.
    """
    try:
        return Scenario(
            width=int(values.get("WIDTH", DEFAULT_FRAME_WIDTH)),
            height=int(values.get("HEIGHT", DEFAULT_FRAME_HEIGHT)),
            fps=float(values.get("FPS", DEFAULT_FPS)),
            duration_frames=int(values.get("FRAMES", DEFAULT_CLIP_FRAMES)),
            maneuvers=parse_maneuvers(values.get("MANEUVERS", "")),
            noise=NoiseProfile(
                jitter_sigma=float(values.get("JITTER", 0.0)),
                dropout_probability=float(values.get("DROPOUT", 0.0)),
                speckle_probability=float(values.get("SPECKLE", 0.0)),
            ),
            mount_bias=float(values.get("MOUNT_BIAS", 0.0)),
            mirror=parse_bool(values.get("MIRROR", "false")),
        )
    except InvalidScenarioError:
        raise
    except ValueError as e:
        raise InvalidScenarioError(f"Invalid scenario setting: {e}") from e


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SuiteEntry:
    name: str
    kind: str
    seed: int
    scenario: Scenario


def build_suite(
    clips_per_kind: int,
    seed: int = 0,
    *,
    duration_frames: int = DEFAULT_CLIP_FRAMES,
    width: int = DEFAULT_FRAME_WIDTH,
    height: int = DEFAULT_FRAME_HEIGHT,
    fps: float = DEFAULT_FPS,
    jitter_sigma: float = SUITE_JITTER_SIGMA,
    dropout_probability: float = SUITE_DROPOUT_PROBABILITY,
    maneuver_frames: int = DEFAULT_MANEUVER_FRAMES,
    amplitude: float = DEFAULT_LATERAL_AMPLITUDE,
) -> list[SuiteEntry]:
    """Scripts a balanced suite of lane-keep, left change, right change and incursion clips.

    Incursions alternate between left and right. Maneuver start frames are
    drawn from ``seed`` and kept away from both clip ends.
    """
    if clips_per_kind < 1:
        raise InvalidScenarioError(f"A suite needs at least one clip per kind, got {clips_per_kind}")
    if duration_frames <= maneuver_frames:
        raise InvalidScenarioError(f"Clips of {duration_frames} frames cannot hold a {maneuver_frames}-frame maneuver")

    margin = min(SUITE_MARGIN_FRAMES, (duration_frames - maneuver_frames) // 2)
    latest_start = duration_frames - margin - maneuver_frames
    rng = np.random.default_rng(seed)
    noise = NoiseProfile(jitter_sigma=jitter_sigma, dropout_probability=dropout_probability)

    entries = []
    for index in range(clips_per_kind):
        for kind in SUITE_KINDS:
            start = int(rng.integers(margin, latest_start + 1))
            if kind == "lane_keep":
                maneuvers: tuple[Maneuver, ...] = ()
            elif kind == "incursion":
                direction = Direction.LEFT if index % 2 == 0 else Direction.RIGHT
                maneuvers = (Maneuver(EventKind.INCURSION, direction, start, maneuver_frames, amplitude),)
            else:
                direction = Direction.LEFT if kind == "left_change" else Direction.RIGHT
                maneuvers = (Maneuver(EventKind.CHANGE, direction, start, maneuver_frames, amplitude),)

            scenario = Scenario(
                width=width,
                height=height,
                fps=fps,
                duration_frames=duration_frames,
                maneuvers=maneuvers,
                noise=noise,
            )
            clip_seed = seed + len(entries)
            entries.append(SuiteEntry(f"{kind}_{index:03d}", kind, clip_seed, scenario))
    return entries


def write_suite(entries: list[SuiteEntry], output_dir: Path) -> Path:
    """Write every suite clip under its own directory plus a ``suite.csv`` index."""
    output_dir = Path(output_dir)
    rows = []
    for position, entry in enumerate(entries, 1):
        logger.info("🎞️ Clip %d/%d: %s", position, len(entries), entry.name)
        manifest = generate(entry.scenario, entry.seed, output_dir / entry.name)
        first = entry.scenario.maneuvers[0] if entry.scenario.maneuvers else None
        rows.append(
            (
                entry.name,
                entry.kind,
                entry.seed,
                first.direction.value if first else Direction.NONE.value,
                first.start_frame if first else "",
                manifest.relative_to(output_dir).as_posix(),
            )
        )
    header = ("clip", "kind", "seed", "direction", "start_frame", "manifest")
    return ArtifactStore(output_dir).write_table(header, rows, SUITE_INDEX_FILENAME)

