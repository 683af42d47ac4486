from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from .errors import DegenerateInputError

# (n, 2) float64 array of x, y pixel coordinates
PointArray: TypeAlias = npt.NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class Point2D:
    """A point in image space, in pixels."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInputError(f"Point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class Line2D:
    """A line in implicit form ``a*x + b*y + c = 0``."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if self.a == 0 and self.b == 0:
            raise DegenerateInputError("Line coefficients a and b cannot both be zero")

    @classmethod
    def vertical(cls, x: float) -> Line2D:
        return cls(1.0, 0.0, -x)

    @classmethod
    def horizontal(cls, y: float) -> Line2D:
        return cls(0.0, 1.0, -y)

    @classmethod
    def through(cls, p: Point2D, q: Point2D) -> Line2D:
        """Line through two distinct points."""
        a = q.y - p.y
        b = p.x - q.x
        return cls(a, b, -(a * p.x + b * p.y))


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices."""

    vertices: tuple[Point2D, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise DegenerateInputError(f"A convex polygon needs at least 3 vertices, got {len(self.vertices)}")

    @classmethod
    def from_array(cls, array: PointArray) -> ConvexPolygon:
        return cls(tuple(Point2D(float(x), float(y)) for x, y in array))

    def as_array(self) -> PointArray:
        return np.array([(v.x, v.y) for v in self.vertices], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.vertices)
