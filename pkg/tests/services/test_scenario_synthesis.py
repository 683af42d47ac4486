"""Test suite for synthetic scenario rendering and suites."""

from unittest.mock import patch

import numpy as np
import pytest

from clients import ArtifactStore, MaskStore
from models import Direction, EventKind, Maneuver, NoiseProfile, Scenario
from models.errors import InvalidScenarioError
from services import build_suite, generate, parse_maneuvers, render_scenario, scenario_from_values, write_clip, write_suite
from services.scenario_synthesis import maneuver_displacement, truth_event


@pytest.fixture
def small_scenario():
    """64x48 clip with every noise source switched on."""
    return Scenario(
        width=64,
        height=48,
        duration_frames=30,
        maneuvers=parse_maneuvers("change:left:5:20:10"),
        noise=NoiseProfile(jitter_sigma=1.0, dropout_probability=0.1, speckle_probability=0.01),
    )


@pytest.mark.unit
@pytest.mark.services
class TestTrajectories:
    """Test suite for maneuver displacement and truth events."""

    def test_change_peaks_then_reanchors(self):
        """A left change rises to +A, jumps to -A and returns to zero."""
        maneuver = Maneuver(EventKind.CHANGE, Direction.LEFT, 100, 60, 80.0)
        frames = np.array([99, 100, 115, 129, 130, 145, 160])

        displacement = maneuver_displacement(maneuver, frames)

        assert displacement[0] == 0.0 and displacement[1] == 0.0
        assert displacement[2] == pytest.approx(40.0)
        assert displacement[3] == pytest.approx(80.0, abs=0.5)
        assert displacement[4] == pytest.approx(-80.0)
        assert displacement[5] == pytest.approx(-40.0)
        assert displacement[6] == 0.0

    def test_right_change_is_negated(self):
        """Direction flips the sign of the displacement."""
        frames = np.arange(100, 160)
        left = maneuver_displacement(Maneuver(EventKind.CHANGE, Direction.LEFT, 100, 60, 80.0), frames)
        right = maneuver_displacement(Maneuver(EventKind.CHANGE, Direction.RIGHT, 100, 60, 80.0), frames)

        np.testing.assert_allclose(right, -left)

    def test_incursion_goes_half_way_and_back(self):
        """An incursion peaks at half the amplitude with no re-anchor."""
        maneuver = Maneuver(EventKind.INCURSION, Direction.RIGHT, 0, 60, 80.0)

        displacement = maneuver_displacement(maneuver, np.arange(60))

        assert displacement.min() == pytest.approx(-40.0)
        assert displacement.max() == 0.0

    def test_truth_event_anchor(self):
        """A left change starting at frame 200 is logged at 200 / 8000 ms."""
        event = truth_event(parse_maneuvers("change:left:200")[0], fps=25.0)

        assert (event.kind, event.direction, event.frame_index) == (EventKind.CHANGE, Direction.LEFT, 200)
        assert event.timestamp_ms == 8000
        assert event.peak_frames == (229, 230)


@pytest.mark.unit
@pytest.mark.services
class TestRenderScenario:
    """Test suite for render_scenario and SyntheticClip."""

    def test_truth_events_of_full_clip(self):
        """The 500-frame example clip carries a single left change at 200."""
        clip = render_scenario(Scenario(maneuvers=parse_maneuvers("change:left:200")), seed=0)

        assert [(e.kind, e.direction, e.frame_index) for e in clip.truth_events] == [(EventKind.CHANGE, Direction.LEFT, 200)]
        assert len(clip) == 500

    def test_same_seed_same_frames(self, small_scenario):
        """Rendering is a pure function of scenario and seed."""
        first = render_scenario(small_scenario, seed=11)
        second = render_scenario(small_scenario, seed=11)

        for position in range(len(first)):
            np.testing.assert_array_equal(first.raster(position), second.raster(position))

    def test_different_seed_different_noise(self, small_scenario):
        """Another seed draws other jitter."""
        assert not np.array_equal(render_scenario(small_scenario, 1).corners, render_scenario(small_scenario, 2).corners)

    def test_mirror_is_horizontal_flip(self, small_scenario):
        """The mirrored scenario renders fliplr frames and swaps truth directions."""
        plain = render_scenario(small_scenario, seed=5)
        mirrored = render_scenario(small_scenario.mirrored(), seed=5)

        for position in range(len(plain)):
            np.testing.assert_array_equal(mirrored.raster(position), np.fliplr(plain.raster(position)))
        np.testing.assert_allclose(mirrored.lateral_offsets, -plain.lateral_offsets - 1)
        assert [e.direction for e in mirrored.truth_events] == [Direction.RIGHT]

    def test_lane_keep_sits_on_centre(self):
        """A noise-free lane keep has a constant trapezoid about the image centre."""
        clip = render_scenario(Scenario(width=64, height=48, duration_frames=3))

        raster = clip.raster(0)
        assert raster[: clip.top_row].sum() == 0
        np.testing.assert_array_equal(raster, np.fliplr(raster))
        np.testing.assert_allclose(clip.lateral_offsets, -0.5)

    def test_full_dropout(self):
        """Dropout probability 1 leaves every frame empty."""
        scenario = Scenario(width=32, height=24, duration_frames=5, noise=NoiseProfile(dropout_probability=1.0))

        clip = render_scenario(scenario, seed=0)

        assert all(mask.is_empty for mask in clip.iter_masks())

    def test_lane_outside_frame(self):
        """A mount bias that pushes the lane out of view is rejected."""
        with pytest.raises(InvalidScenarioError, match="outside the frame"):
            render_scenario(Scenario(width=64, height=48, duration_frames=3, mount_bias=1000.0))

    def test_masks_carry_frame_metadata(self, small_scenario):
        """Masks are indexed from zero with timestamps at the clip fps."""
        masks = list(render_scenario(small_scenario).iter_masks())

        assert [m.frame_index for m in masks] == list(range(30))
        assert masks[10].timestamp_ms == 400


@pytest.mark.unit
@pytest.mark.services
class TestWriteClip:
    """Test suite for writing clips to disk."""

    @patch("services.scenario_synthesis.logger")
    def test_writes_all_artifacts(self, mock_logger, small_scenario, tmp_path):
        """Frames, manifest, truth log and trajectory land in the output directory."""
        clip = render_scenario(small_scenario, seed=3)

        manifest_path = write_clip(clip, tmp_path / "clip")

        store = MaskStore()
        manifest = store.load_manifest(manifest_path)
        assert (manifest.width, manifest.height, len(manifest)) == (64, 48, 30)
        assert (tmp_path / "clip" / "frame_000029.pgm").is_file()
        np.testing.assert_array_equal(store.load_frame(manifest, manifest.entries[7]).pixels, clip.raster(7))

        artifacts = ArtifactStore(tmp_path / "clip")
        assert artifacts.read_events("truth_events.jsonl") == clip.truth_events
        trajectory = artifacts.read_trajectory("trajectory.csv")
        assert trajectory[12] == pytest.approx(clip.lateral_offsets[12], abs=1e-6)
        mock_logger.info.assert_called_once()

    def test_generate_is_byte_identical(self, small_scenario, tmp_path):
        """Same scenario and seed write byte-identical files."""
        generate(small_scenario, 9, tmp_path / "a")
        generate(small_scenario, 9, tmp_path / "b")

        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.unit
@pytest.mark.services
class TestScenarioParsing:
    """Test suite for maneuver strings and scenario settings."""

    def test_parse_maneuvers(self):
        """Items split on ';' and missing fields take the defaults."""
        maneuvers = parse_maneuvers("change:left:200:60:80; incursion:RIGHT:350")

        assert maneuvers == (
            Maneuver(EventKind.CHANGE, Direction.LEFT, 200, 60, 80.0),
            Maneuver(EventKind.INCURSION, Direction.RIGHT, 350, 60, 80.0),
        )

    def test_empty_string_is_lane_keep(self):
        """No items, no maneuvers."""
        assert parse_maneuvers("") == ()

    @pytest.mark.parametrize(
        "raw",
        ["change:left", "swerve:left:10", "change:up:10", "change:left:abc", "change:left:10:1", "change:none:10", "a:b:c:d:e:f"],
    )
    def test_parse_maneuvers_rejects(self, raw):
        """Malformed items raise InvalidScenarioError."""
        with pytest.raises(InvalidScenarioError):
            parse_maneuvers(raw)

    def test_scenario_from_values(self):
        """Flat settings map onto the scenario fields."""
        scenario = scenario_from_values(
            {"WIDTH": "320", "HEIGHT": "240", "FRAMES": "300", "MANEUVERS": "incursion:left:100", "JITTER": "1.5", "MIRROR": "true"}
        )

        assert (scenario.width, scenario.height, scenario.duration_frames) == (320, 240, 300)
        assert scenario.noise.jitter_sigma == 1.5
        assert scenario.mirror
        assert scenario.maneuvers[0].kind is EventKind.INCURSION

    def test_scenario_defaults(self):
        """Missing keys fall back to the default 752x480 clip."""
        scenario = scenario_from_values({})

        assert (scenario.width, scenario.height, scenario.fps, scenario.duration_frames) == (752, 480, 25.0, 500)
        assert scenario.maneuvers == ()

    @pytest.mark.parametrize(
        "values",
        [
            {"WIDTH": "wide"},
            {"DROPOUT": "2"},
            {"MIRROR": "maybe"},
            {"MANEUVERS": "change:left:100;change:right:120"},
            {"MANEUVERS": "change:left:480"},
            {"WIDTH": "4"},
        ],
    )
    def test_invalid_scenarios(self, values):
        """Bad values, overlapping or overrunning maneuvers are rejected."""
        with pytest.raises(InvalidScenarioError):
            scenario_from_values(values)


@pytest.mark.unit
@pytest.mark.services
class TestSuites:
    """Test suite for build_suite and write_suite."""

    def test_suite_layout(self):
        """Kinds cycle in a fixed order with consecutive seeds."""
        entries = build_suite(3, seed=7)

        assert [e.name for e in entries[:5]] == [
            "lane_keep_000",
            "left_change_000",
            "right_change_000",
            "incursion_000",
            "lane_keep_001",
        ]
        assert [e.seed for e in entries] == list(range(7, 19))
        assert all(e.scenario.maneuvers == () for e in entries if e.kind == "lane_keep")

    def test_incursions_alternate(self):
        """Incursion clips alternate left and right."""
        entries = build_suite(4)

        directions = [e.scenario.maneuvers[0].direction for e in entries if e.kind == "incursion"]
        assert directions == [Direction.LEFT, Direction.RIGHT, Direction.LEFT, Direction.RIGHT]

    def test_starts_stay_inside_margin(self):
        """Maneuvers keep 100 frames from both clip ends."""
        for entry in build_suite(10, seed=3):
            for maneuver in entry.scenario.maneuvers:
                assert 100 <= maneuver.start_frame
                assert maneuver.end_frame <= 400

    def test_short_clips_shrink_the_margin(self):
        """With 200-frame clips the only start left is frame 70."""
        entries = build_suite(2, duration_frames=200)

        assert {m.start_frame for e in entries for m in e.scenario.maneuvers} == {70}

    def test_suite_is_deterministic(self):
        """Same seed, same suite."""
        assert build_suite(2, seed=5) == build_suite(2, seed=5)

    def test_suite_noise(self):
        """Suite clips carry the default jitter and dropout."""
        noise = build_suite(1)[0].scenario.noise

        assert (noise.jitter_sigma, noise.dropout_probability) == (2.0, 0.01)

    @pytest.mark.parametrize("kwargs", [{"clips_per_kind": 0}, {"clips_per_kind": 1, "duration_frames": 60}])
    def test_invalid_suites(self, kwargs):
        """A suite needs clips and room for the maneuver."""
        with pytest.raises(InvalidScenarioError):
            build_suite(**kwargs)

    @patch("services.scenario_synthesis.logger")
    def test_write_suite_index(self, mock_logger, tmp_path):
        """Every clip gets a directory and a row in suite.csv."""
        entries = build_suite(1, seed=2, width=64, height=48, duration_frames=80, maneuver_frames=20)

        index = write_suite(entries, tmp_path)

        lines = index.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "clip,kind,seed,direction,start_frame,manifest"
        assert lines[1] == "lane_keep_000,lane_keep,2,none,,lane_keep_000/manifest.csv"
        assert lines[2].startswith("left_change_000,left_change,3,left,")
        assert len(lines) == 5
        assert all((tmp_path / e.name / "manifest.csv").is_file() for e in entries)
