"""Local-disk store for PGM lane masks and clip manifests."""

from __future__ import annotations

import re
from collections.abc import Iterator
from pathlib import Path

import numpy as np

from config.mask_config import DEFAULT_FPS, PGM_ASCII_MAGIC, PGM_BINARY_MAGIC, PGM_LANE_VALUE, PGM_MAXVAL
from models import FrameEntry, Mask, RoiMask, SequenceManifest
from models.errors import (
    ArtifactFormatError,
    DimensionMismatchError,
    EmptySequenceError,
    MaskFormatError,
    MaskReadError,
)
from utils import logger

# Whitespace and '#' comments may precede every header token
_HEADER_TOKEN = re.compile(rb"(?:\s|#[^\n]*(?:\n|$))*([^\s#]+)")

_MANIFEST_HEADERS = {"fps,width,height", "frame_index,relative_path"}


def decode_pgm(data: bytes, source: str = "<bytes>") -> tuple[int, int, np.ndarray]:
    """Decode an 8-bit PGM (P5 binary or P2 ASCII) into a 0/1 raster.

    Args:
        data: Raw file contents
        source: Name used in error messages

    Returns:
        Tuple of (width, height, raster) with raster shape (height, width)

    Raises:
        MaskFormatError: On bad magic, bad header fields or short pixel data
    """
    magic = data[:2]
    if magic not in (PGM_BINARY_MAGIC, PGM_ASCII_MAGIC):
        raise MaskFormatError(f"{source}: not a PGM file (magic {magic!r})")

    position = 2
    fields: list[int] = []
    for name in ("width", "height", "maxval"):
        match = _HEADER_TOKEN.match(data, position)
        if match is None:
            raise MaskFormatError(f"{source}: truncated header, missing {name}")
        try:
            fields.append(int(match.group(1)))
        except ValueError as e:
            raise MaskFormatError(f"{source}: invalid {name} {match.group(1)!r}") from e
        position = match.end()

    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise MaskFormatError(f"{source}: invalid dimensions {width}x{height}")
    if not 0 < maxval <= PGM_MAXVAL:
        raise MaskFormatError(f"{source}: only 8-bit PGM is supported, maxval {maxval}")

    expected = width * height
    if magic == PGM_BINARY_MAGIC:
        # Exactly one whitespace byte separates maxval from the raster
        if position >= len(data) or not data[position : position + 1].isspace():
            raise MaskFormatError(f"{source}: missing raster after header")
        raster_bytes = data[position + 1 : position + 1 + expected]
        if len(raster_bytes) < expected:
            raise MaskFormatError(f"{source}: truncated raster, expected {expected} bytes, got {len(raster_bytes)}")
        values = np.frombuffer(raster_bytes, dtype=np.uint8)
    else:
        tokens = data[position:].split()
        if len(tokens) < expected:
            raise MaskFormatError(f"{source}: truncated raster, expected {expected} samples, got {len(tokens)}")
        try:
            values = np.array([int(token) for token in tokens[:expected]], dtype=np.int64)
        except ValueError as e:
            raise MaskFormatError(f"{source}: non-numeric sample in ASCII raster") from e

    if values.size and int(values.max()) > maxval:
        raise MaskFormatError(f"{source}: sample exceeds maxval {maxval}")

    raster = (values.reshape(height, width) > 0).astype(np.uint8)
    return width, height, raster


def encode_pgm(pixels: np.ndarray) -> bytes:
    """Encode a 0/1 raster as binary P5 (lane = 255, background = 0)."""
    height, width = pixels.shape
    header = b"%s\n%d %d\n%d\n" % (PGM_BINARY_MAGIC, width, height, PGM_MAXVAL)
    body = np.where(pixels > 0, PGM_LANE_VALUE, 0).astype(np.uint8).tobytes()
    return header + body


class MaskStore:
    """Reads and writes lane masks, ROI masks and manifests on local disk."""

    def __init__(self, fps: float = DEFAULT_FPS):
        """Initialize the store.

        Args:
            fps: Frame rate used for timestamps when no manifest supplies one
        """
        self.fps = fps

    def _read_bytes(self, path: Path) -> bytes:
        try:
            return path.read_bytes()
        except OSError as e:
            logger.error("Failed to read %s", path)
            raise MaskReadError(f"Cannot read {path}: {e.strerror or e}") from e

    def load_mask(self, path: Path, frame_index: int = 0, fps: float | None = None) -> Mask:
        """Load one PGM mask; any sample > 0 becomes a lane pixel.

        Raises:
            MaskReadError: If the file cannot be read
            MaskFormatError: If it does not parse as 8-bit PGM
        """
        path = Path(path)
        _, _, raster = decode_pgm(self._read_bytes(path), source=str(path))
        mask = Mask.from_pixels(raster, frame_index=frame_index, fps=fps or self.fps)
        logger.debug("Loaded mask %s: frame %d, %d lane pixels", path.name, frame_index, mask.lane_pixel_count)
        return mask

    def load_roi(self, path: Path, width: int | None = None, height: int | None = None) -> RoiMask:
        """Load the static ROI skim mask, optionally checking it against the frame size."""
        path = Path(path)
        roi_width, roi_height, raster = decode_pgm(self._read_bytes(path), source=str(path))
        if width is not None and height is not None and (roi_width, roi_height) != (width, height):
            raise DimensionMismatchError(f"{path}: ROI is {roi_width}x{roi_height}, frames are {width}x{height}")
        roi = RoiMask(width=roi_width, height=roi_height, pixels=raster)
        logger.info("  🎭 ROI loaded: %s (%d of %d pixels kept)", path.name, int(raster.sum()), raster.size)
        return roi

    def save_mask(self, mask: Mask | RoiMask, path: Path) -> Path:
        """Write a mask as binary PGM, creating parent directories."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(encode_pgm(mask.pixels))
        except OSError as e:
            logger.error("Failed to write mask %s", path)
            raise MaskReadError(f"Cannot write {path}: {e.strerror or e}") from e
        return path

    def load_manifest(self, path: Path) -> SequenceManifest:
        """Parse a clip manifest.

        The first line holds ``fps,width,height`` values; every following line
        is ``frame_index,relative_path``. Column header lines are skipped and
        paths resolve against the manifest's directory.

        Raises:
            MaskReadError: If the manifest cannot be read
            EmptySequenceError: If the file is empty
            ArtifactFormatError: If a line does not parse
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            logger.error("Failed to read manifest %s", path)
            raise MaskReadError(f"Cannot read manifest {path}: {e.strerror or e}") from e

        lines = [
            (number, line.strip())
            for number, line in enumerate(text.splitlines(), 1)
            if line.strip() and line.strip().replace(" ", "") not in _MANIFEST_HEADERS
        ]
        if not lines:
            raise EmptySequenceError(f"Manifest {path} has no frames")

        number, first = lines[0]
        try:
            fps_text, width_text, height_text = (part.strip() for part in first.split(","))
            fps, width, height = float(fps_text), int(width_text), int(height_text)
        except ValueError as e:
            raise ArtifactFormatError(f"{path}:{number}: expected 'fps,width,height', got {first!r}") from e

        entries: list[FrameEntry] = []
        for number, line in lines[1:]:
            index_text, _, relative = line.partition(",")
            try:
                frame_index = int(index_text)
            except ValueError as e:
                raise ArtifactFormatError(f"{path}:{number}: expected 'frame_index,relative_path', got {line!r}") from e
            if not relative.strip():
                raise ArtifactFormatError(f"{path}:{number}: missing mask path")
            entries.append(FrameEntry(frame_index=frame_index, path=path.parent / relative.strip()))

        manifest = SequenceManifest(fps=fps, width=width, height=height, entries=tuple(entries))
        logger.info("  📂 Manifest loaded: %d frames @ %.1f fps (%dx%d)", len(manifest), fps, width, height)
        return manifest

    def write_manifest(self, manifest: SequenceManifest, path: Path) -> Path:
        """Write a manifest; entry paths are stored relative to its directory when possible."""
        path = Path(path)
        lines = [f"{manifest.fps:g},{manifest.width},{manifest.height}"]
        for entry in manifest.entries:
            try:
                relative = entry.path.relative_to(path.parent)
            except ValueError:
                relative = entry.path
            lines.append(f"{entry.frame_index},{relative.as_posix()}")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as e:
            logger.error("Failed to write manifest %s", path)
            raise MaskReadError(f"Cannot write manifest {path}: {e.strerror or e}") from e
        return path

    def load_frame(self, manifest: SequenceManifest, entry: FrameEntry) -> Mask:
        """Load one manifest entry, checking its size against the manifest."""
        mask = self.load_mask(entry.path, frame_index=entry.frame_index, fps=manifest.fps)
        if (mask.width, mask.height) != (manifest.width, manifest.height):
            raise DimensionMismatchError(
                f"{entry.path} (frame {entry.frame_index}): mask is {mask.width}x{mask.height}, "
                f"manifest says {manifest.width}x{manifest.height}"
            )
        return mask

    def iter_masks(self, manifest: SequenceManifest) -> Iterator[Mask]:
        """Yield the clip's masks in frame order."""
        for entry in manifest.entries:
            yield self.load_frame(manifest, entry)


def load_mask(path: Path, frame_index: int = 0, fps: float = DEFAULT_FPS) -> Mask:
    """Loads a single PGM mask from disk."""
    return MaskStore(fps=fps).load_mask(path, frame_index=frame_index)
