"""File artifacts written by the pipeline: offset CSVs, event logs and JSON reports."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from config.output_config import FLOAT_DECIMALS
from models import LaneEvent, OffsetSample, OffsetSeries, SeriesStage, TrackingResult
from models.errors import ArtifactFormatError, MaskReadError
from utils import logger

OFFSETS_HEADER = ("frame_index", "raw", "centered", "smoothed", "valid", "horizontal")
TRAJECTORY_HEADER = ("frame_index", "lateral_offset")


def _format_float(value: float) -> str:
    return "nan" if math.isnan(value) else f"{value:.{FLOAT_DECIMALS}f}"


def _round_floats(value: Any) -> Any:
    """Recursively round floats so JSON output is stable across platforms."""
    if isinstance(value, float):
        return None if not math.isfinite(value) else round(value, FLOAT_DECIMALS)
    if isinstance(value, np.floating):
        return _round_floats(float(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _round_floats(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_round_floats(v) for v in value]
    return value


def dumps_json(document: Any) -> str:
    return json.dumps(_round_floats(document), sort_keys=True, indent=2) + "\n"


class ArtifactStore:
    """Reads and writes run artifacts under one output directory."""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)

    def path_for(self, name: str | Path) -> Path:
        """Resolve an artifact name against the output directory (absolute paths pass through)."""
        path = Path(name)
        return path if path.is_absolute() else self.output_dir / path

    def _write_text(self, name: str | Path, text: str) -> Path:
        path = self.path_for(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            logger.error("Failed to write artifact %s", path)
            raise MaskReadError(f"Cannot write {path}: {e.strerror or e}") from e
        logger.debug("Wrote %s (%d bytes)", path, len(text))
        return path

    def _read_text(self, name: str | Path) -> tuple[Path, str]:
        path = self.path_for(name)
        try:
            return path, path.read_text(encoding="utf-8")
        except OSError as e:
            logger.error("Failed to read artifact %s", path)
            raise MaskReadError(f"Cannot read {path}: {e.strerror or e}") from e

    # ------------------------------------------------------------------
    # Offset series
    # ------------------------------------------------------------------
    def write_offsets(self, result: TrackingResult, name: str | Path) -> Path:
        """Write ``frame_index,raw,centered,smoothed,valid,horizontal`` rows."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(OFFSETS_HEADER)
        rows = zip(result.raw.samples, result.centered.samples, result.smoothed.samples, strict=True)
        for raw, centered, smoothed in rows:
            writer.writerow(
                (
                    raw.frame_index,
                    _format_float(raw.vertical_offset),
                    _format_float(centered.vertical_offset),
                    _format_float(smoothed.vertical_offset),
                    int(raw.valid),
                    _format_float(raw.horizontal_offset),
                )
            )
        return self._write_text(name, buffer.getvalue())

    def read_offsets(self, name: str | Path, fps: float = 25.0) -> TrackingResult:
        """Parse an offsets CSV back into its three series stages."""
        path, text = self._read_text(name)
        reader = csv.DictReader(io.StringIO(text))
        missing = set(OFFSETS_HEADER[:5]) - set(reader.fieldnames or ())
        if missing:
            raise ArtifactFormatError(f"{path}: missing columns {sorted(missing)}")

        stages: dict[str, list[OffsetSample]] = {"raw": [], "centered": [], "smoothed": []}
        for line_number, row in enumerate(reader, 2):
            try:
                frame_index = int(row["frame_index"])
                valid = row["valid"].strip() == "1"
                horizontal = float(row.get("horizontal") or "nan")
                for stage, samples in stages.items():
                    samples.append(OffsetSample(frame_index, float(row[stage]), horizontal, valid))
            except (TypeError, ValueError) as e:
                raise ArtifactFormatError(f"{path}:{line_number}: malformed offsets row {row!r}") from e

        return TrackingResult(
            raw=OffsetSeries(tuple(stages["raw"]), SeriesStage.RAW, fps),
            centered=OffsetSeries(tuple(stages["centered"]), SeriesStage.CENTERED, fps),
            smoothed=OffsetSeries(tuple(stages["smoothed"]), SeriesStage.SMOOTHED, fps),
        )

    # ------------------------------------------------------------------
    # Event logs
    # ------------------------------------------------------------------
    def write_events(self, events: Iterable[LaneEvent], name: str | Path) -> Path:
        """Write one JSON object per line; an empty log is an empty file."""
        lines = [json.dumps(event.to_record(), sort_keys=True) for event in events]
        return self._write_text(name, "".join(f"{line}\n" for line in lines))

    def read_events(self, name: str | Path) -> list[LaneEvent]:
        """Parse a JSONL event log, sorted by anchor frame."""
        path, text = self._read_text(name)
        events = []
        for line_number, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ArtifactFormatError(f"{path}:{line_number}: invalid JSON") from e
            if not isinstance(record, dict):
                raise ArtifactFormatError(f"{path}:{line_number}: expected a JSON object")
            events.append(LaneEvent.from_record(record))
        return sorted(events, key=lambda e: e.frame_index)

    # ------------------------------------------------------------------
    # JSON documents
    # ------------------------------------------------------------------
    def write_json(self, document: dict[str, Any], name: str | Path) -> Path:
        return self._write_text(name, dumps_json(document))

    def read_json(self, name: str | Path) -> dict[str, Any]:
        path, text = self._read_text(name)
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ArtifactFormatError(f"{path}: invalid JSON") from e
        if not isinstance(document, dict):
            raise ArtifactFormatError(f"{path}: expected a JSON object")
        return document

    # ------------------------------------------------------------------
    # Synthetic clip bookkeeping
    # ------------------------------------------------------------------
    def write_trajectory(self, frame_indices: Sequence[int], offsets: Sequence[float], name: str | Path) -> Path:
        """Write the programmed lateral trajectory of a synthetic clip."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for frame_index, offset in zip(frame_indices, offsets, strict=True):
            writer.writerow((int(frame_index), _format_float(float(offset))))
        return self._write_text(name, buffer.getvalue())

    def read_trajectory(self, name: str | Path) -> dict[int, float]:
        path, text = self._read_text(name)
        try:
            return {int(row["frame_index"]): float(row["lateral_offset"]) for row in csv.DictReader(io.StringIO(text))}
        except (KeyError, TypeError, ValueError) as e:
            raise ArtifactFormatError(f"{path}: malformed trajectory CSV") from e

    def write_table(self, header: Sequence[str], rows: Iterable[Sequence[Any]], name: str | Path) -> Path:
        """Write a plain CSV table (used for the suite index)."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return self._write_text(name, buffer.getvalue())
