"""Shared test configuration and fixtures."""

import os
from unittest.mock import patch

import numpy as np
import pytest

from clients import MaskStore
from models import FrameEntry, Mask, OffsetSample, OffsetSeries, SequenceManifest, SeriesStage


@pytest.fixture(autouse=True)
def clean_lane_environment():
    """Hide LANE_* variables from the developer's shell or .env file."""
    environment = {key: value for key, value in os.environ.items() if not key.startswith("LANE_")}
    with patch.dict(os.environ, environment, clear=True):
        yield


@pytest.fixture
def trapezoid_pixels():
    """Builder for a filled lane trapezoid raster (bottom rows widest)."""

    def build(
        width: int = 80,
        height: int = 60,
        centre: float | None = None,
        bottom_width: float = 32.0,
        top_width: float = 8.0,
        top_row: int = 30,
    ) -> np.ndarray:
        centre = (width - 1) / 2 if centre is None else centre
        rows = np.arange(top_row, height)
        t = (rows - top_row) / max(height - 1 - top_row, 1)
        half = (top_width + (bottom_width - top_width) * t) / 2
        columns = np.arange(width)
        pixels = np.zeros((height, width), dtype=np.uint8)
        pixels[top_row:] = (columns >= centre - half[:, None]) & (columns <= centre + half[:, None])
        return pixels

    return build


@pytest.fixture
def trapezoid_mask(trapezoid_pixels):
    """Single-frame trapezoid mask centred in an 80x60 frame."""
    return Mask.from_pixels(trapezoid_pixels())


@pytest.fixture
def make_series():
    """Builder for an offset series from plain values; NaN marks an invalid frame."""

    def build(values, stage: SeriesStage = SeriesStage.CENTERED, frames=None, fps: float = 25.0) -> OffsetSeries:
        values = np.asarray(values, dtype=np.float64)
        frames = np.arange(len(values)) if frames is None else np.asarray(frames)
        samples = tuple(
            OffsetSample(int(f), float(v), float("nan") if np.isnan(v) else 100.0, bool(np.isfinite(v)))
            for f, v in zip(frames, values, strict=True)
        )
        return OffsetSeries(samples, stage, fps)

    return build


@pytest.fixture
def mask_store():
    """Mask store at the default frame rate."""
    return MaskStore()


@pytest.fixture
def write_sequence(tmp_path, mask_store):
    """Writes rasters as PGM frames plus a manifest; returns the manifest path."""

    def build(rasters, fps: float = 25.0, name: str = "clip"):
        directory = tmp_path / name
        entries = []
        for index, pixels in enumerate(rasters):
            path = directory / f"frame_{index:06d}.pgm"
            mask_store.save_mask(Mask.from_pixels(pixels, frame_index=index), path)
            entries.append(FrameEntry(index, path))
        height, width = np.asarray(rasters[0]).shape
        manifest = SequenceManifest(fps=fps, width=width, height=height, entries=tuple(entries))
        return mask_store.write_manifest(manifest, directory / "manifest.csv")

    return build
