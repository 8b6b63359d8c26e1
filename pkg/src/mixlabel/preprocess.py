"""Forced statuses, obstacle propagation, label scaling and the density parameter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .geometry import Direction, Point, point_in_polygon, ray_hits_rect, ray_through_point
from .model import Infeasible, Instance, Polygon
from .validity import EXT, INT, label_blocked, leader_blocked, pair_conflict


@dataclass
class PreprocessReport:
    """Statuses that every valid labeling must (or, for P_X, should) respect.

    ``forced_external`` is P_X: points whose closed label rectangle contains
    another point.  ``forced_internal`` holds points whose leader runs through
    another point.  Both are informational: the solvers decide everything
    from the open-interior conflict rules.  ``must_internal`` and
    ``must_external`` come from obstacle propagation and are binding.
    """

    forced_external: frozenset[int]
    forced_internal: frozenset[int]
    leader_hits_PX: tuple[bool, ...]
    delta: int
    scaled: bool = False
    must_internal: frozenset[int] = frozenset()
    must_external: frozenset[int] = frozenset()
    rounds: int = 0

    def __post_init__(self):
        if self.forced_external & self.forced_internal:
            raise Infeasible("a point is forced both internal and external")


@dataclass(frozen=True)
class Obstacle:
    polygon: Polygon

    def __post_init__(self):
        if len(self.polygon) < 3:
            raise ValueError("an obstacle needs at least three vertices")
        if not _is_simple(self.polygon):
            raise ValueError("obstacle polygon must be simple")

    @classmethod
    def of(cls, vertices: Sequence[Sequence]) -> "Obstacle":
        return cls(tuple(Point.of(x, y) for x, y in vertices))


def _segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    def orient(p, q, r):
        v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
        return (v > 0) - (v < 0)

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True

    def on(p, q, r):
        return orient(p, q, r) == 0 and min(p.x, q.x) <= r.x <= max(p.x, q.x) and min(p.y, q.y) <= r.y <= max(p.y, q.y)

    return on(a, b, c) or on(a, b, d) or on(c, d, a) or on(c, d, b)


def _is_simple(poly: Polygon) -> bool:
    n = len(poly)
    if len(set(poly)) != n:
        return False
    edges = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return False
    return True


def min_distance_squared(points: Sequence[Point]) -> Fraction | None:
    best = None
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            dx, dy = points[i].x - points[j].x, points[i].y - points[j].y
            d2 = dx * dx + dy * dy
            if best is None or d2 < best:
                best = d2
    return best


def density(points: Sequence[Point]) -> int:
    """min(n, ceil(1 / d_min)), computed exactly; 1 for a single point."""
    n = len(points)
    d2 = min_distance_squared(points)
    if d2 is None:
        return 1
    # smallest k with k * d_min >= 1, i.e. k*k*d2 >= 1
    k = max(1, math.ceil(1 / math.sqrt(d2)) - 1)
    while k * k * d2 < 1:
        k += 1
    while k > 1 and (k - 1) * (k - 1) * d2 >= 1:
        k -= 1
    return min(n, k)


def compute_forced(inst: Instance) -> PreprocessReport:
    n = inst.n
    px = frozenset(
        i
        for i in range(n)
        if any(j != i and inst.label(i).contains_closed(inst.points[j]) for j in range(n))
    )
    through = frozenset(
        i
        for i in range(n)
        if any(j != i and ray_through_point(inst.leader(i), inst.points[j]) for j in range(n))
    )
    hits = tuple(
        any(ray_hits_rect(inst.leader(e), inst.label(i)) for e in px if e != i) for i in range(n)
    )
    return PreprocessReport(px, through, hits, density(inst.points))


def obstacle_fixpoint(inst: Instance, obstacles: Sequence[Obstacle] | None = None) -> PreprocessReport:
    """Propagate statuses forced by obstacles until nothing changes.

    A leader that meets an obstacle forces its point internal, a label that
    meets one forces its point external.  Forced labels and leaders then act
    as obstacles themselves.  Raises :class:`Infeasible` when a point lies
    inside an obstacle or ends up forced both ways.
    """
    if obstacles is not None:
        inst = replace(inst, obstacles=tuple(o.polygon for o in obstacles))
    base = compute_forced(inst)
    n = inst.n
    for i, p in enumerate(inst.points):
        if any(point_in_polygon(p, poly) for poly in inst.obstacles):
            raise Infeasible(f"point {i} lies inside an obstacle")
    must_int: set[int] = set()
    must_ext: set[int] = set()
    for i in range(n):
        if inst.obstacles and leader_blocked(inst, i):
            must_int.add(i)
        if inst.obstacles and label_blocked(inst, i):
            must_ext.add(i)
    rounds = 1 if (must_int or must_ext) else 0
    frontier = [(i, INT) for i in sorted(must_int)] + [(i, EXT) for i in sorted(must_ext)]
    while frontier:
        if must_int & must_ext:
            break
        nxt = []
        for i, s in frontier:
            for j in range(n):
                if j == i:
                    continue
                if j in must_int or j in must_ext:
                    t = INT if j in must_int else EXT
                    if j not in must_int & must_ext and pair_conflict(inst, i, s, j, t):
                        raise Infeasible(f"forced statuses of points {i} and {j} clash")
                    continue
                # j cannot take status t if it clashes with i's forced status
                if pair_conflict(inst, i, s, j, INT):
                    must_ext.add(j)
                    nxt.append((j, EXT))
                    if pair_conflict(inst, i, s, j, EXT):
                        must_int.add(j)
                elif pair_conflict(inst, i, s, j, EXT):
                    must_int.add(j)
                    nxt.append((j, INT))
        if nxt:
            rounds += 1
        frontier = nxt
    both = must_int & must_ext
    if both:
        raise Infeasible(f"point {min(both)} is forced both internal and external")
    base.must_internal = frozenset(must_int)
    base.must_external = frozenset(must_ext)
    base.rounds = rounds
    return base


def scale_instance(inst: Instance, w=None, h=None) -> Instance:
    """Rescale so that labels become unit squares.

    Frame-independent: x is divided by the label width and y by the label
    height; the leader direction, map and obstacles are transformed alike.
    """
    w = inst.w if w is None else Fraction(w)
    h = inst.h if h is None else Fraction(h)
    if w <= 0 or h <= 0:
        raise ValueError("label sides must be positive")
    if (w, h) != (inst.w, inst.h):
        raise ValueError("all labels must share one size")

    def s(p: Point) -> Point:
        return Point(p.x / w, p.y / h)

    d = Direction.of(Fraction(inst.direction.dx) / w, Fraction(inst.direction.dy) / h)
    mp = None if inst.map_polygon is None else tuple(s(p) for p in inst.map_polygon)
    return Instance(
        tuple(s(p) for p in inst.points),
        d,
        Fraction(1),
        Fraction(1),
        mp,
        tuple(tuple(s(p) for p in poly) for poly in inst.obstacles),
    )
