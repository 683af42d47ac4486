"""2D geometry primitives used to track the lane region.

Provides the QuickHull convex hull, the polygon area centroid and the
point-to-line distances that turn a hull centroid into lane offsets.
All functions are pure and safe to call from several threads.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt

from models.errors import DegenerateInputError
from models.geometry import ConvexPolygon, Line2D, Point2D, PointArray

# Relative tolerance for treating a polygon's doubled area as zero
_AREA_EPSILON = 1e-12


def as_point_array(points: Iterable[Point2D] | PointArray) -> PointArray:
    """Normalize a point collection to an ``(n, 2)`` float64 array.

    Args:
        points: Point2D objects or an array of x, y rows

    Returns:
        Array of shape (n, 2)

    Raises:
        DegenerateInputError: If the array is malformed or holds NaN/Inf
    """
    if isinstance(points, np.ndarray):
        array = np.asarray(points, dtype=np.float64)
    else:
        array = np.array([(p.x, p.y) for p in points], dtype=np.float64)
    if array.size == 0:
        return array.reshape(0, 2)
    if array.ndim != 2 or array.shape[1] != 2:
        raise DegenerateInputError(f"Expected an (n, 2) point array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DegenerateInputError("Point coordinates must be finite")
    return array


def _cross(p: PointArray, q: PointArray, points: PointArray) -> npt.NDArray[np.float64]:
    """(q - p) x (r - p) for every r; negative means r is right of p->q."""
    return (q[0] - p[0]) * (points[:, 1] - p[1]) - (q[1] - p[1]) * (points[:, 0] - p[0])


def _find_hull(points: PointArray, p: PointArray, q: PointArray) -> list[PointArray]:
    """Hull vertices strictly right of p->q, ordered from p towards q (both excluded)."""
    if len(points) == 0:
        return []
    # argmax keeps the lowest index on ties
    farthest = points[int(np.argmax(-_cross(p, q, points)))]
    right_of_pc = points[_cross(p, farthest, points) < 0]
    right_of_cq = points[_cross(farthest, q, points) < 0]
    return [*_find_hull(right_of_pc, p, farthest), farthest, *_find_hull(right_of_cq, farthest, q)]


def quickhull(points: Iterable[Point2D] | PointArray) -> ConvexPolygon:
    """Computes the convex hull of a 2D point set with QuickHull.

    Duplicate points are collapsed and points lying on hull edges are not
    kept as vertices. The leftmost and rightmost points split the set into a
    lower and an upper chain that are refined recursively around the point
    farthest from each chord.

    Args:
        points: At least three non-collinear points

    Returns:
        Strictly convex polygon with counter-clockwise vertices drawn from the input

    Raises:
        DegenerateInputError: If fewer than 3 distinct points are given or all are collinear
    """
    array = as_point_array(points)
    if len(array) < 3:
        raise DegenerateInputError(f"QuickHull needs at least 3 points, got {len(array)}")

    _, first_seen = np.unique(array, axis=0, return_index=True)
    array = array[np.sort(first_seen)]
    if len(array) < 3:
        raise DegenerateInputError(f"QuickHull needs at least 3 distinct points, got {len(array)}")

    order = np.lexsort((array[:, 1], array[:, 0]))
    leftmost, rightmost = array[order[0]], array[order[-1]]
    side = _cross(leftmost, rightmost, array)

    vertices = [
        leftmost,
        *_find_hull(array[side < 0], leftmost, rightmost),
        rightmost,
        *_find_hull(array[side > 0], rightmost, leftmost),
    ]
    if len(vertices) < 3:
        raise DegenerateInputError("All points are collinear")
    return ConvexPolygon.from_array(np.array(vertices))


def polygon_area(poly: ConvexPolygon) -> float:
    """Signed shoelace area; positive for counter-clockwise vertices."""
    vertices = poly.as_array()
    d = vertices - vertices[0]
    x, y = d[:, 0], d[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) / 2.0)


def polygon_centroid(poly: ConvexPolygon) -> Point2D:
    """Computes the area centroid of a polygon.

    This is the first moment of the enclosed region divided by its area, not
    the mean of the vertices, so it does not drift towards densely sampled
    edges. Vertices are shifted to the first vertex before accumulating to
    keep the result stable for large pixel coordinates.

    Args:
        poly: Polygon with non-zero area

    Returns:
        The centroid point

    Raises:
        DegenerateInputError: If the polygon encloses no area
    """
    vertices = poly.as_array()
    origin = vertices[0]
    d = vertices - origin
    x, y = d[:, 0], d[:, 1]
    x_next, y_next = np.roll(x, -1), np.roll(y, -1)
    cross = x * y_next - x_next * y
    doubled_area = float(np.sum(cross))

    scale = float(np.max(np.abs(d))) if d.size else 0.0
    if abs(doubled_area) <= _AREA_EPSILON * max(scale * scale, 1.0):
        raise DegenerateInputError("Polygon has zero area")

    cx = float(np.sum((x + x_next) * cross)) / (3.0 * doubled_area)
    cy = float(np.sum((y + y_next) * cross)) / (3.0 * doubled_area)
    return Point2D(cx + float(origin[0]), cy + float(origin[1]))


def point_line_distance(line: Line2D, p: Point2D) -> float:
    """Returns |a*x0 + b*y0 + c| / sqrt(a^2 + b^2) in pixels."""
    norm = math.hypot(line.a, line.b)
    if norm == 0:
        raise DegenerateInputError("Line coefficients a and b cannot both be zero")
    return abs(line.a * p.x + line.b * p.y + line.c) / norm


def signed_center_offset(p: Point2D, center_x: float) -> float:
    """Signed horizontal displacement of ``p`` from the vertical line ``x = center_x``.

    Positive values lie right of the line.
    """
    return p.x - center_x


def points_in_convex_polygon(poly: ConvexPolygon, points: PointArray, tol: float = 1e-9) -> npt.NDArray[np.bool_]:
    """Vectorized inside-or-on test against a counter-clockwise convex polygon."""
    vertices = poly.as_array()
    inside = np.ones(len(points), dtype=bool)
    for start, end in zip(vertices, np.roll(vertices, -1, axis=0), strict=True):
        inside &= _cross(start, end, points) >= -tol
    return inside


def point_in_convex_polygon(poly: ConvexPolygon, p: Point2D, tol: float = 1e-9) -> bool:
    return bool(points_in_convex_polygon(poly, np.array([[p.x, p.y]]), tol)[0])
