"""Mask preparation: ROI skimming and reduction of lane masks to hull input points."""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from config.mask_config import MAX_POINTS
from models import ConvexPolygon, Mask, PointArray, RoiMask
from models.errors import DimensionMismatchError, EmptyMaskError, InvalidConfigError
from utils import as_point_array, logger, points_in_convex_polygon, quickhull


def apply_roi(mask: Mask, roi: RoiMask) -> Mask:
    """Pixelwise AND of a lane mask with the static ROI skim mask.

    Raises:
        DimensionMismatchError: If the ROI and mask sizes differ
    """
    if (roi.width, roi.height) != (mask.width, mask.height):
        raise DimensionMismatchError(
            f"ROI is {roi.width}x{roi.height} but frame {mask.frame_index} is {mask.width}x{mask.height}"
        )
    return mask.with_pixels(mask.pixels & roi.pixels)


def _row_extreme_indices(rows: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
    """Indices of the first and last lane pixel of every row (rows sorted ascending)."""
    count = len(rows)
    starts = np.flatnonzero(np.r_[True, rows[1:] != rows[:-1]])
    ends = np.r_[starts[1:] - 1, count - 1]
    return np.unique(np.concatenate((starts, ends)))


def mask_to_points(mask: Mask, max_points: int = MAX_POINTS, keep_row_extremes: bool = False) -> PointArray:
    """Returns lane-pixel coordinates as an ``(n, 2)`` array of x, y.

    Points come out in row-major order. When the mask has more than
    ``max_points`` lane pixels every k-th pixel is kept, with
    ``k = ceil(n / max_points)``. With ``keep_row_extremes`` each row's
    outermost pixels are always kept, since they alone determine the hull,
    and the stride fills whatever budget is left.

    Args:
        mask: Nonempty lane mask
        max_points: Upper bound on the number of returned points
        keep_row_extremes: Preserve the hull support set while subsampling

    Returns:
        Array with at most ``max_points`` rows

    Raises:
        InvalidConfigError: If ``max_points`` is below 3
        EmptyMaskError: If the mask has no lane pixels
    """
    if max_points < 3:
        raise InvalidConfigError(f"max_points must be >= 3, got {max_points}")
    rows, cols = np.nonzero(mask.pixels)
    if len(rows) == 0:
        raise EmptyMaskError(f"Frame {mask.frame_index} has no lane pixels")

    points = np.column_stack((cols, rows)).astype(np.float64)
    count = len(points)
    if count <= max_points:
        return points

    if keep_row_extremes:
        extremes = _row_extreme_indices(rows)
        if len(extremes) <= max_points:
            budget = max_points - len(extremes)
            rest = np.setdiff1d(np.arange(count), extremes, assume_unique=True)
            fill = rest[:: math.ceil(len(rest) / budget)] if budget and len(rest) else rest[:0]
            return points[np.union1d(extremes, fill)]
        logger.debug(
            "Frame %d: %d row extremes exceed max_points=%d, using plain stride",
            mask.frame_index,
            len(extremes),
            max_points,
        )

    stride = math.ceil(count / max_points)
    return points[::stride]


def extract_hull(
    mask: Mask,
    roi: RoiMask | None = None,
    max_points: int = MAX_POINTS,
    keep_row_extremes: bool = False,
) -> ConvexPolygon:
    """ROI-filter a mask, sample its lane pixels and return their convex hull.

    Raises:
        EmptyMaskError: If no lane pixel survives the ROI
        DegenerateInputError: If the surviving pixels are collinear or fewer than 3
    """
    if roi is not None:
        mask = apply_roi(mask, roi)
    return quickhull(mask_to_points(mask, max_points=max_points, keep_row_extremes=keep_row_extremes))


def hull_coverage(mask: Mask, polygon: ConvexPolygon) -> float:
    """Fraction of the mask's lane pixels lying inside or on ``polygon``."""
    rows, cols = np.nonzero(mask.pixels)
    if len(rows) == 0:
        raise EmptyMaskError(f"Frame {mask.frame_index} has no lane pixels")
    points = as_point_array(np.column_stack((cols, rows)).astype(np.float64))
    return float(np.count_nonzero(points_in_convex_polygon(polygon, points)) / len(points))
