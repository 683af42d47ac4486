"""Test suite for 2D geometry primitives."""

import itertools
import math

import numpy as np
import pytest
from scipy.stats import qmc

from models import ConvexPolygon, Line2D, Point2D
from models.errors import DegenerateInputError
from utils import (
    as_point_array,
    point_in_convex_polygon,
    point_line_distance,
    points_in_convex_polygon,
    polygon_area,
    polygon_centroid,
    quickhull,
    signed_center_offset,
)


def _cross(p, q, r):
    return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])


def brute_force_hull(points: np.ndarray) -> set[tuple[float, float]]:
    """O(n^3) oracle: a point is a hull vertex iff no triangle of other points strictly contains it."""
    triangles = np.array(list(itertools.combinations(range(len(points)), 3)))
    a = points[triangles[:, 0]][:, None, :]
    b = points[triangles[:, 1]][:, None, :]
    c = points[triangles[:, 2]][:, None, :]
    p = points[None, :, :]
    d1, d2, d3 = _cross(a, b, p), _cross(b, c, p), _cross(c, a, p)
    inside = ((d1 > 0) & (d2 > 0) & (d3 > 0)) | ((d1 < 0) & (d2 < 0) & (d3 < 0))
    keep = ~inside.any(axis=0)
    return {(float(x), float(y)) for x, y in points[keep]}


def vertex_set(polygon: ConvexPolygon) -> set[tuple[float, float]]:
    return {(v.x, v.y) for v in polygon.vertices}


def vertex_indices(polygon: ConvexPolygon, points: np.ndarray) -> set[int]:
    """Positions in ``points`` of the hull's vertices."""
    position = {(float(x), float(y)): i for i, (x, y) in enumerate(points)}
    return {position[(v.x, v.y)] for v in polygon.vertices}


@pytest.mark.unit
@pytest.mark.utils
class TestQuickHull:
    """Test suite for the QuickHull implementation."""

    def test_square_drops_interior_point(self):
        """Interior points are not hull vertices."""
        points = [Point2D(0, 0), Point2D(1, 0), Point2D(1, 1), Point2D(0, 1), Point2D(0.5, 0.5)]

        hull = quickhull(points)

        assert len(hull) == 4
        assert vertex_set(hull) == {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}

    def test_triangle_is_its_own_hull(self):
        """A triangle returns its three points."""
        hull = quickhull(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]))

        assert vertex_set(hull) == {(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)}

    def test_vertices_are_counter_clockwise(self):
        """Signed area of the hull is positive."""
        rng = np.random.default_rng(3)
        hull = quickhull(rng.uniform(0, 100, size=(40, 2)))

        assert polygon_area(hull) > 0

    def test_vertex_order_starts_at_leftmost_point(self):
        """The first vertex is the lowest of the leftmost points."""
        hull = quickhull(np.array([[5.0, 5.0], [0.0, 2.0], [0.0, 1.0], [3.0, 0.0], [4.0, 4.0]]))

        assert (hull.vertices[0].x, hull.vertices[0].y) == (0.0, 1.0)

    def test_duplicates_are_collapsed(self):
        """Repeated points produce a single vertex each."""
        points = np.array([[0.0, 0.0], [0.0, 0.0], [4.0, 0.0], [4.0, 0.0], [2.0, 3.0], [2.0, 3.0]])

        hull = quickhull(points)

        assert len(hull) == 3

    def test_points_on_edges_are_not_vertices(self):
        """Collinear points on a hull edge are excluded."""
        points = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [0.0, 1.0]])

        hull = quickhull(points)

        assert vertex_set(hull) == {(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)}

    def test_hull_contains_every_input_point(self):
        """No input point lies outside the hull."""
        rng = np.random.default_rng(11)
        points = rng.normal(50, 15, size=(200, 2))

        hull = quickhull(points)

        assert points_in_convex_polygon(hull, points).all()

    def test_vertices_are_drawn_from_input(self):
        """Hull vertices are a subset of the input points."""
        rng = np.random.default_rng(5)
        points = rng.uniform(0, 10, size=(30, 2))

        hull = quickhull(points)

        assert vertex_set(hull) <= {(float(x), float(y)) for x, y in points}

    @pytest.mark.parametrize(
        "points",
        [
            np.empty((0, 2)),
            np.array([[0.0, 0.0], [1.0, 1.0]]),
            np.array([[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]),
        ],
    )
    def test_too_few_points_raise(self, points):
        """Fewer than three distinct points cannot form a hull."""
        with pytest.raises(DegenerateInputError):
            quickhull(points)

    def test_collinear_points_raise(self):
        """Collinear input has no area."""
        with pytest.raises(DegenerateInputError, match="collinear"):
            quickhull(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]))

    def test_matches_brute_force_oracle(self):
        """1,000 seeded random sets agree exactly with the O(n^3) oracle."""
        rng = np.random.default_rng(2024)

        for trial in range(1000):
            n = int(rng.integers(3, 51))
            points = rng.uniform(0, 100, size=(n, 2))

            assert vertex_set(quickhull(points)) == brute_force_hull(points), f"trial {trial}, n={n}"

    def test_hull_of_hull_is_the_same_hull(self):
        """Re-hulling the vertices of a hull returns the same vertex set."""
        rng = np.random.default_rng(99)

        for trial in range(200):
            points = rng.uniform(0, 100, size=(int(rng.integers(3, 51)), 2))
            hull = quickhull(points)

            assert vertex_set(quickhull(hull.as_array())) == vertex_set(hull), f"trial {trial}"

    def test_rigid_motion_equivariance(self):
        """Rotating and translating the input moves the hull and centroid with it."""
        rng = np.random.default_rng(314)

        for trial in range(200):
            points = rng.uniform(0, 100, size=(int(rng.integers(3, 51)), 2))
            angle = rng.uniform(0, 2 * math.pi)
            rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
            shift = rng.uniform(-500, 500, size=2)
            moved = points @ rotation.T + shift

            hull = quickhull(points)
            moved_hull = quickhull(moved)

            assert vertex_indices(moved_hull, moved) == vertex_indices(hull, points), f"trial {trial}"
            centroid = polygon_centroid(hull)
            moved_centroid = polygon_centroid(moved_hull)
            expected = np.array([centroid.x, centroid.y]) @ rotation.T + shift
            assert np.allclose([moved_centroid.x, moved_centroid.y], expected, rtol=1e-9, atol=1e-9), f"trial {trial}"


@pytest.mark.unit
@pytest.mark.utils
class TestPolygonCentroid:
    """Test suite for the area centroid."""

    def test_unit_square(self):
        """Square centroid is its centre."""
        square = ConvexPolygon.from_array(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))

        centroid = polygon_centroid(square)

        assert centroid.x == pytest.approx(0.5)
        assert centroid.y == pytest.approx(0.5)

    def test_triangle(self):
        """Triangle centroid equals the vertex mean."""
        triangle = ConvexPolygon.from_array(np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]]))

        centroid = polygon_centroid(triangle)

        assert (centroid.x, centroid.y) == pytest.approx((1.0, 1.0))

    def test_is_not_vertex_mean(self):
        """Densely sampled edges do not pull the centroid."""
        # Trapezoid with an extra vertex crowding the right side
        vertices = np.array([[0.0, 0.0], [10.0, 0.0], [10.0, 1.0], [10.0 - 1e-3, 9.0], [0.0, 10.0]])
        polygon = ConvexPolygon.from_array(vertices)

        centroid = polygon_centroid(polygon)

        assert centroid.x < vertices[:, 0].mean()

    def test_orientation_independent(self):
        """Clockwise and counter-clockwise vertex orders agree."""
        vertices = np.array([[1.0, 1.0], [7.0, 2.0], [6.0, 6.0], [2.0, 5.0]])
        ccw = polygon_centroid(ConvexPolygon.from_array(vertices))
        cw = polygon_centroid(ConvexPolygon.from_array(vertices[::-1]))

        assert (ccw.x, ccw.y) == pytest.approx((cw.x, cw.y))

    def test_large_coordinates_are_stable(self):
        """Translation to far-away pixel coordinates keeps precision."""
        offset = 1e7
        square = ConvexPolygon.from_array(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]) + offset)

        centroid = polygon_centroid(square)

        assert centroid.x == pytest.approx(offset + 0.5, abs=1e-6)
        assert centroid.y == pytest.approx(offset + 0.5, abs=1e-6)

    def test_zero_area_raises(self):
        """A flattened polygon has no centroid."""
        flat = ConvexPolygon.from_array(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))

        with pytest.raises(DegenerateInputError, match="zero area"):
            polygon_centroid(flat)

    def test_matches_quasi_monte_carlo_estimate(self):
        """Irregular pentagon centroid agrees with a 2^20-sample estimate within 0.01 px."""
        rng = np.random.default_rng(17)
        angles = np.sort(rng.uniform(0, 2 * math.pi, size=5))
        vertices = np.column_stack((50 + 30 * np.cos(angles), 40 + 20 * np.sin(angles)))
        polygon = ConvexPolygon.from_array(vertices)

        low, high = vertices.min(axis=0), vertices.max(axis=0)
        samples = qmc.scale(qmc.Sobol(d=2, scramble=True, seed=17).random_base2(m=20), low, high)
        inside = samples[points_in_convex_polygon(polygon, samples)]
        estimate = inside.mean(axis=0)

        centroid = polygon_centroid(polygon)

        assert abs(centroid.x - estimate[0]) < 0.01
        assert abs(centroid.y - estimate[1]) < 0.01


@pytest.mark.unit
@pytest.mark.utils
class TestDistances:
    """Test suite for point-line distances and offsets."""

    def test_point_line_distance(self):
        """|3*3 + 4*4 + 0| / 5 = 5."""
        assert point_line_distance(Line2D(3.0, 4.0, 0.0), Point2D(3.0, 4.0)) == pytest.approx(5.0)

    def test_distance_to_bottom_edge(self):
        """Centroid (400, 300) in a 752x480 frame is 180 px above the bottom edge."""
        assert point_line_distance(Line2D.horizontal(480.0), Point2D(400.0, 300.0)) == pytest.approx(180.0)

    def test_distance_is_nonnegative(self):
        """Points on either side of the line report positive distances."""
        line = Line2D.vertical(10.0)

        assert point_line_distance(line, Point2D(4.0, 0.0)) == pytest.approx(6.0)
        assert point_line_distance(line, Point2D(16.0, 0.0)) == pytest.approx(6.0)

    def test_line_through_points(self):
        """A point on the line has zero distance."""
        line = Line2D.through(Point2D(0.0, 0.0), Point2D(2.0, 2.0))

        assert point_line_distance(line, Point2D(5.0, 5.0)) == pytest.approx(0.0)

    def test_degenerate_line_raises(self):
        """a = b = 0 is not a line."""
        with pytest.raises(DegenerateInputError):
            Line2D(0.0, 0.0, 1.0)

    def test_signed_center_offset(self):
        """Centroid x 400 in a 752-wide frame sits +24 px right of centre."""
        assert signed_center_offset(Point2D(400.0, 300.0), 752 / 2) == pytest.approx(24.0)
        assert signed_center_offset(Point2D(352.0, 300.0), 752 / 2) == pytest.approx(-24.0)


@pytest.mark.unit
@pytest.mark.utils
class TestPointArrays:
    """Test suite for point normalization and containment."""

    def test_accepts_point_objects(self):
        """Point2D sequences become an (n, 2) array."""
        array = as_point_array([Point2D(1.0, 2.0), Point2D(3.0, 4.0)])

        assert array.shape == (2, 2)
        assert array[1].tolist() == [3.0, 4.0]

    def test_rejects_wrong_shape(self):
        """Rows must hold exactly two coordinates."""
        with pytest.raises(DegenerateInputError, match="shape"):
            as_point_array(np.zeros((4, 3)))

    def test_rejects_non_finite(self):
        """NaN coordinates are rejected."""
        with pytest.raises(DegenerateInputError, match="finite"):
            as_point_array(np.array([[0.0, np.nan], [1.0, 1.0]]))

    def test_point_in_convex_polygon(self):
        """Boundary points count as inside."""
        square = ConvexPolygon.from_array(np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]))

        assert point_in_convex_polygon(square, Point2D(1.0, 1.0))
        assert point_in_convex_polygon(square, Point2D(2.0, 1.0))
        assert not point_in_convex_polygon(square, Point2D(2.5, 1.0))
