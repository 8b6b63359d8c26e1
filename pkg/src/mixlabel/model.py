"""Problem instances and labelings."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import (
    LEFT,
    Direction,
    LeaderRay,
    Point,
    Rect,
    as_scalar,
    bounding_box,
    polygon_area2,
)

Polygon = tuple[Point, ...]


class Infeasible(ValueError):
    """No valid labeling exists for the instance."""


@dataclass(frozen=True)
class Instance:
    """Points to label, the label size, the leader direction and the map.

    ``map_polygon`` is a convex counterclockwise polygon; ``None`` means the
    default box (bounding box of points and labels inflated by ``n + 2``).
    """

    points: tuple[Point, ...]
    direction: Direction = LEFT
    w: Fraction = Fraction(1)
    h: Fraction = Fraction(1)
    map_polygon: Optional[Polygon] = None
    obstacles: tuple[Polygon, ...] = ()

    def __post_init__(self):
        if not self.points:
            raise ValueError("an instance needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")
        if self.w <= 0 or self.h <= 0:
            raise ValueError("label sides must be positive")
        for poly in self.obstacles:
            if len(poly) < 3:
                raise ValueError("obstacles need at least three vertices")

    @classmethod
    def build(
        cls,
        points: Iterable[Sequence],
        direction: Direction = LEFT,
        w=1,
        h=1,
        map_polygon=None,
        obstacles=(),
    ) -> "Instance":
        pts = tuple(Point.of(x, y) for x, y in points)
        mp = None if map_polygon is None else tuple(Point.of(x, y) for x, y in map_polygon)
        obs = tuple(tuple(Point.of(x, y) for x, y in poly) for poly in obstacles)
        return cls(pts, direction, as_scalar(w), as_scalar(h), mp, obs)

    @property
    def n(self) -> int:
        return len(self.points)

    def with_direction(self, direction: Direction) -> "Instance":
        return replace(self, direction=direction)

    def label(self, i: int) -> Rect:
        return Rect(self.points[i], self.w, self.h)

    def leader(self, i: int) -> LeaderRay:
        return LeaderRay(self.points[i], self.direction)

    def map_or_default(self) -> Polygon:
        if self.map_polygon is not None:
            return self.map_polygon
        return default_map(self.points, self.w, self.h)


def default_map(points: Sequence[Point], w: Fraction, h: Fraction) -> Polygon:
    x0, y0, x1, y1 = bounding_box(points)
    pad = Fraction(len(points) + 2) * max(Fraction(1), w, h)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + w + pad, y1 + h + pad
    return (Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1))


def is_convex_ccw(poly: Sequence[Point]) -> bool:
    n = len(poly)
    if n < 3 or polygon_area2(poly) <= 0:
        return False
    for i in range(n):
        a, b, c = poly[i], poly[(i + 1) % n], poly[(i + 2) % n]
        if (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x) < 0:
            return False
    return True


@dataclass(frozen=True)
class Labeling:
    internal: frozenset[int]
    external: frozenset[int]

    @classmethod
    def from_internal(cls, n: int, internal: Iterable[int]) -> "Labeling":
        inside = frozenset(internal)
        return cls(inside, frozenset(range(n)) - inside)

    def check_partition(self, n: int) -> None:
        if self.internal & self.external:
            raise ValueError("a point cannot be both internal and external")
        if self.internal | self.external != frozenset(range(n)):
            raise ValueError("labeling must cover every point exactly once")

    @property
    def count(self) -> int:
        return len(self.internal)


@dataclass
class SolveResult:
    optimum: int
    labeling: Labeling
    solver: str
    stats: dict = field(default_factory=dict)
