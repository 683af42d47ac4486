"""Entry point for the lane departure tracker.

Usage::

    lane-tracker run clip/manifest.csv --output-dir results/
    lane-tracker eval --pred-events results/events.jsonl --truth-events clip/truth_events.jsonl
    lane-tracker synth --scenario left_change.env --output-dir clip/ --seed 7
    lane-tracker hull clip/frame_000000.pgm
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from clients import ArtifactStore, MaskStore, dumps_json
from config import (
    CENTERING_MODE,
    CENTERING_WINDOW,
    EVENT_MATCH_WINDOW,
    EVENTS_FILENAME,
    INVERT_DIRECTION,
    IOU_THRESHOLDS,
    KALMAN_LAG,
    KEEP_ROW_EXTREMES,
    MAX_PAIR_DISTANCE,
    MAX_POINTS,
    MEASUREMENT_NOISE,
    MIN_PEAK_DISTANCE,
    MIN_PROMINENCE,
    OFFSETS_FILENAME,
    PROCESS_NOISE,
    REPORT_FILENAME,
    SHALLOWNESS_GATE,
    SUMMARY_FILENAME,
    TRACKING_WORKERS,
    SettingsResolver,
    load_config_file,
    parse_bool,
    parse_float_list,
)
from models import (
    CenteringMode,
    Direction,
    EvalConfig,
    EvalRunConfig,
    EventKind,
    KalmanConfig,
    LaneEvent,
    Line2D,
    PeakConfig,
    RunConfig,
    TrackingResult,
)
from models.errors import EmptySequenceError, FrameMismatchError, LaneTrackerError
from services import (
    EventClassifier,
    EventTally,
    OffsetTracker,
    build_report,
    build_suite,
    extract_hull,
    generate,
    hull_coverage,
    mask_confusion,
    parse_counts,
    scenario_from_values,
    write_suite,
)
from utils import frames_to_seconds, logger, point_line_distance, polygon_area, polygon_centroid, signed_center_offset


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------
def _summary(config: RunConfig, fps: float, size: tuple[int, int], result: TrackingResult, events: list[LaneEvent]) -> dict[str, Any]:
    counts = {
        f"{kind.value}_{direction.value}": sum(1 for e in events if e.kind is kind and e.direction is direction)
        for kind in EventKind
        for direction in (Direction.LEFT, Direction.RIGHT)
    }
    return {
        "manifest": config.manifest_path.as_posix(),
        "fps": fps,
        "width": size[0],
        "height": size[1],
        "frames": len(result.raw),
        "duration_s": frames_to_seconds(len(result.raw), fps),
        "valid_frames": result.raw.valid_count,
        "invalid_frames": len(result.raw) - result.raw.valid_count,
        "segments": [list(segment) for segment in result.segments],
        "events": {"total": len(events), **counts},
        "config": config.describe(),
    }


def run_pipeline(config: RunConfig) -> int:
    """Run the mask → offsets → events pipeline for one clip and write its artifacts."""
    logger.info("🚀 PIPELINE STARTED: Lane departure tracking")
    mask_store = MaskStore()
    artifacts = ArtifactStore(config.output_dir)

    # 1️⃣ Loading
    logger.info("📂 STEP 1: Loading - Reading manifest %s...", config.manifest_path)
    manifest = mask_store.load_manifest(config.manifest_path)
    if not manifest.entries:
        raise EmptySequenceError(f"Manifest {config.manifest_path} has no frames")
    roi = mask_store.load_roi(config.roi_path, manifest.width, manifest.height) if config.roi_path else None
    logger.info("✅ Loading complete: %d frames listed", len(manifest))

    # 2️⃣ Tracking
    logger.info("🔍 STEP 2: Tracking - Hulling lane masks and smoothing offsets...")
    result = OffsetTracker.from_run_config(config).track(mask_store.iter_masks(manifest), roi=roi, fps=manifest.fps)
    logger.info(
        "✅ Tracking complete: %d/%d valid frames in %d segment(s)",
        result.raw.valid_count,
        len(result.raw),
        len(result.segments),
    )

    # 3️⃣ Classification
    logger.info("🚗 STEP 3: Classification - Detecting lane changes and incursions...")
    events = EventClassifier(config.peaks, fps=manifest.fps).classify_series(result.smoothed)
    logger.info("✅ Classification complete: %d event(s)", len(events))

    # 4️⃣ Artifacts
    logger.info("💾 STEP 4: Output - Writing artifacts to %s...", config.output_dir)
    artifacts.write_offsets(result, OFFSETS_FILENAME)
    artifacts.write_events(events, EVENTS_FILENAME)
    artifacts.write_json(_summary(config, manifest.fps, (manifest.width, manifest.height), result, events), SUMMARY_FILENAME)

    logger.info("🎉 PIPELINE COMPLETE: %d frames → %d event(s)", len(result.raw), len(events))
    return 0


def _run_config(args: argparse.Namespace, resolver: SettingsResolver) -> RunConfig:
    manifest_path = Path(args.manifest)
    output_dir = resolver.get("OUTPUT_DIR", args.output_dir, manifest_path.parent / "results", Path)
    roi_path = resolver.get("ROI", args.roi, None, Path)
    kalman = KalmanConfig(
        lag=resolver.get("LAG", args.lag, KALMAN_LAG, int),
        process_noise=resolver.get("PROCESS_NOISE", args.process_noise, PROCESS_NOISE, float),
        measurement_noise=resolver.get("MEASUREMENT_NOISE", args.measurement_noise, MEASUREMENT_NOISE, float),
    )
    peaks = PeakConfig(
        min_prominence=resolver.get("PROMINENCE", args.prominence, MIN_PROMINENCE, float),
        min_peak_distance=resolver.get("MIN_PEAK_DISTANCE", args.min_peak_distance, MIN_PEAK_DISTANCE, int),
        max_pair_distance=resolver.get("MAX_PAIR_DISTANCE", args.max_pair_distance, MAX_PAIR_DISTANCE, int),
        invert_direction=resolver.get("INVERT_DIRECTION", args.invert_direction, INVERT_DIRECTION, parse_bool),
        shallowness_gate=resolver.get("SHALLOWNESS_GATE", args.shallowness_gate, SHALLOWNESS_GATE, parse_bool),
    )
    return RunConfig(
        manifest_path=manifest_path,
        output_dir=output_dir,
        roi_path=roi_path,
        kalman=kalman,
        peaks=peaks,
        max_points=resolver.get("MAX_POINTS", args.max_points, MAX_POINTS, int),
        keep_row_extremes=resolver.get("KEEP_ROW_EXTREMES", args.keep_row_extremes, KEEP_ROW_EXTREMES, parse_bool),
        centering=resolver.get(
            "CENTERING",
            CenteringMode(args.centering) if args.centering else None,
            CenteringMode(CENTERING_MODE),
            CenteringMode,
        ),
        centering_window=resolver.get("CENTERING_WINDOW", args.centering_window, CENTERING_WINDOW, int),
        workers=resolver.get("WORKERS", args.workers, TRACKING_WORKERS, int),
    )


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------
def run_eval(config: EvalRunConfig) -> int:
    """Score predicted events and/or masks against ground truth and write the report."""
    logger.info("🚀 EVALUATION STARTED")
    mask_store = MaskStore()
    artifacts = ArtifactStore(Path())

    tally: EventTally | None = None
    if config.counts_path is not None:
        logger.info("📥 Loading confusion counts from %s...", config.counts_path)
        tally = EventTally.from_counts(parse_counts(artifacts.read_json(config.counts_path)), config.evaluation)

    if config.pred_events:
        logger.info("🎯 STEP 1: Events - Matching %d clip(s)...", len(config.pred_events))
        tally = tally or EventTally(config.evaluation)
        for predicted_path, truth_path in zip(config.pred_events, config.truth_events, strict=True):
            tally.add_clip(artifacts.read_events(predicted_path), artifacts.read_events(truth_path))
        logger.info("✅ Event matching complete: %d clip(s)", tally.clips)

    mask_counts = None
    if config.pred_manifest is not None and config.truth_manifest is not None:
        logger.info("🧮 STEP 2: Masks - Scoring IoU against ground truth...")
        predicted = mask_store.load_manifest(config.pred_manifest)
        truth = mask_store.load_manifest(config.truth_manifest)
        predicted_frames = [e.frame_index for e in predicted.entries]
        if predicted_frames != [e.frame_index for e in truth.entries]:
            raise FrameMismatchError(f"{config.pred_manifest} and {config.truth_manifest} list different frames")
        mask_counts = mask_confusion(
            list(mask_store.iter_masks(predicted)),
            list(mask_store.iter_masks(truth)),
            config.evaluation,
        )
        logger.info("✅ Mask scoring complete: %d frames", len(predicted_frames))

    report = build_report(tally, mask_counts)
    artifacts.write_json(report, config.output_path)
    logger.info(
        "🎉 EVALUATION COMPLETE: mAP %s, sensitivity %s → %s",
        "n/a" if report["map"] is None else f"{report['map']:.4f}",
        "n/a" if report["sensitivity"] is None else f"{report['sensitivity']:.4f}",
        config.output_path,
    )
    return 0


def _eval_config(args: argparse.Namespace, resolver: SettingsResolver) -> EvalRunConfig:
    evaluation = EvalConfig(
        iou_thresholds=resolver.get(
            "IOU_THRESHOLDS",
            parse_float_list(args.iou_threshold) if args.iou_threshold else None,
            IOU_THRESHOLDS,
            parse_float_list,
        ),
        event_match_window=resolver.get("MATCH_WINDOW", args.match_window, EVENT_MATCH_WINDOW, int),
    )
    return EvalRunConfig(
        output_path=Path(args.output),
        pred_events=tuple(Path(p) for p in args.pred_events),
        truth_events=tuple(Path(p) for p in args.truth_events),
        pred_manifest=Path(args.pred_manifest) if args.pred_manifest else None,
        truth_manifest=Path(args.truth_manifest) if args.truth_manifest else None,
        counts_path=Path(args.counts) if args.counts else None,
        evaluation=evaluation,
    )


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------
def run_synth(args: argparse.Namespace, resolver: SettingsResolver) -> int:
    """Render one scripted scenario, or a balanced suite, to disk."""
    output_dir = Path(args.output_dir)
    seed = resolver.get("SEED", args.seed, 0, int)

    overrides = {"WIDTH": args.width, "HEIGHT": args.height, "FRAMES": args.frames, "JITTER": args.jitter, "DROPOUT": args.dropout}
    values = dict(resolver.file_values)
    for key, cli_value in overrides.items():
        value = resolver.get(key, cli_value, None, str)
        if value is not None:
            values[key] = str(value)

    if args.suite:
        logger.info("🎬 SUITE: Rendering %d clip(s) of each kind to %s...", args.suite, output_dir)
        scenario = scenario_from_values(values)
        suite_options: dict[str, Any] = {
            "duration_frames": scenario.duration_frames,
            "width": scenario.width,
            "height": scenario.height,
            "fps": scenario.fps,
        }
        for key, option in (("JITTER", "jitter_sigma"), ("DROPOUT", "dropout_probability")):
            if key in values:
                suite_options[option] = float(values[key])
        index = write_suite(build_suite(args.suite, seed, **suite_options), output_dir)
        logger.info("🎉 SUITE COMPLETE: index written to %s", index)
        return 0

    scenario = scenario_from_values(values)
    logger.info(
        "🎬 SYNTH: %d frames at %dx%d with %d maneuver(s), seed %d",
        scenario.duration_frames,
        scenario.width,
        scenario.height,
        len(scenario.maneuvers),
        seed,
    )
    manifest = generate(scenario, seed, output_dir)
    logger.info("🎉 SYNTH COMPLETE: manifest written to %s", manifest)
    return 0


# ---------------------------------------------------------------------------
# hull
# ---------------------------------------------------------------------------
def run_hull(args: argparse.Namespace, resolver: SettingsResolver) -> int:
    """Print one mask's hull vertices, centroid, offsets and coverage as JSON."""
    mask_store = MaskStore()
    mask = mask_store.load_mask(Path(args.mask))
    roi_path = resolver.get("ROI", args.roi, None, Path)
    roi = mask_store.load_roi(roi_path, mask.width, mask.height) if roi_path else None
    polygon = extract_hull(
        mask,
        roi=roi,
        max_points=resolver.get("MAX_POINTS", args.max_points, MAX_POINTS, int),
        keep_row_extremes=resolver.get("KEEP_ROW_EXTREMES", args.keep_row_extremes, KEEP_ROW_EXTREMES, parse_bool),
    )
    centroid = polygon_centroid(polygon)
    document = {
        "width": mask.width,
        "height": mask.height,
        "lane_pixels": mask.lane_pixel_count,
        "vertices": [[v.x, v.y] for v in polygon.vertices],
        "area": polygon_area(polygon),
        "centroid": [centroid.x, centroid.y],
        "vertical_offset": signed_center_offset(centroid, mask.width / 2.0),
        "horizontal_offset": point_line_distance(Line2D.horizontal(float(mask.height)), centroid),
        "coverage": hull_coverage(mask, polygon),
    }
    print(dumps_json(document), end="")
    return 0


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lane-tracker", description="Lane departure detection from lane segmentation masks.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Track offsets and classify events for one clip")
    run.add_argument("manifest", help="Clip manifest (fps,width,height then frame_index,path lines)")
    run.add_argument("--config", help="Flat KEY=VALUE settings file")
    run.add_argument("--roi", type=Path, help="ROI skim mask (PGM)")
    run.add_argument("--output-dir", type=Path, help="Artifact directory (default: <manifest dir>/results)")
    run.add_argument("--lag", type=int, help=f"Smoother lag in frames (default {KALMAN_LAG})")
    run.add_argument("--process-noise", type=float, help=f"px^2/frame^2 (default {PROCESS_NOISE})")
    run.add_argument("--measurement-noise", type=float, help=f"px^2 (default {MEASUREMENT_NOISE})")
    run.add_argument("--prominence", type=float, help=f"Minimum peak prominence in px (default {MIN_PROMINENCE})")
    run.add_argument("--min-peak-distance", type=int, help=f"Frames (default {MIN_PEAK_DISTANCE})")
    run.add_argument("--max-pair-distance", type=int, help=f"Frames (default {MAX_PAIR_DISTANCE})")
    run.add_argument("--invert-direction", action="store_const", const=True, help="Swap left/right")
    run.add_argument("--no-shallowness-gate", dest="shallowness_gate", action="store_const", const=False)
    run.add_argument("--max-points", type=int, help=f"Hull input cap (default {MAX_POINTS})")
    run.add_argument("--no-row-extremes", dest="keep_row_extremes", action="store_const", const=False)
    run.add_argument("--centering", choices=[m.value for m in CenteringMode])
    run.add_argument("--centering-window", type=int, help=f"Frames (default {CENTERING_WINDOW})")
    run.add_argument("--workers", type=int, help="Threads for per-frame hull extraction")

    evaluate = subparsers.add_parser("eval", help="Score predictions against ground truth")
    evaluate.add_argument("--config", help="Flat KEY=VALUE settings file")
    evaluate.add_argument("--pred-events", action="append", default=[], help="Predicted event log (repeat per clip)")
    evaluate.add_argument("--truth-events", action="append", default=[], help="Ground-truth event log (repeat per clip)")
    evaluate.add_argument("--pred-manifest", help="Manifest of predicted masks")
    evaluate.add_argument("--truth-manifest", help="Manifest of ground-truth masks")
    evaluate.add_argument("--counts", help='JSON {"left": {"tp", "fp", "fn"}, "right": {...}}')
    evaluate.add_argument("--iou-threshold", help="Comma-separated IoU thresholds (default 0.5)")
    evaluate.add_argument("--match-window", type=int, help=f"Frames (default {EVENT_MATCH_WINDOW})")
    evaluate.add_argument("--output", default=REPORT_FILENAME, help="Report path")

    synth = subparsers.add_parser("synth", help="Render synthetic ground-truth clips")
    synth.add_argument("--scenario", help="Scenario KEY=VALUE file")
    synth.add_argument("--output-dir", required=True, help="Directory for frames and truth logs")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--suite", type=int, help="Render N clips of each maneuver kind instead")
    synth.add_argument("--frames", type=int)
    synth.add_argument("--width", type=int)
    synth.add_argument("--height", type=int)
    synth.add_argument("--jitter", type=float, help="Corner jitter sigma in px")
    synth.add_argument("--dropout", type=float, help="Per-frame dropout probability")

    hull = subparsers.add_parser("hull", help="Debug: hull and centroid of one mask")
    hull.add_argument("mask", help="PGM mask")
    hull.add_argument("--config", help="Flat KEY=VALUE settings file")
    hull.add_argument("--roi", type=Path, help="ROI skim mask (PGM)")
    hull.add_argument("--max-points", type=int, help=f"Hull input cap (default {MAX_POINTS})")
    hull.add_argument("--no-row-extremes", dest="keep_row_extremes", action="store_const", const=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config_path = args.scenario if args.command == "synth" else args.config
        resolver = SettingsResolver(load_config_file(Path(config_path) if config_path else None))
        if args.command == "hull":
            return run_hull(args, resolver)
        if args.command == "run":
            return run_pipeline(_run_config(args, resolver))
        if args.command == "eval":
            return run_eval(_eval_config(args, resolver))
        return run_synth(args, resolver)
    except LaneTrackerError as e:
        logger.error("❌ %s failed: %s", args.command, e)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
