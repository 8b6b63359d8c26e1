"""Optimising over the leader direction.

Which leaders hit which labels only changes when a leader runs through a
label corner, and two leaders only become collinear along the line through
their points.  Sorting all directions defined by pairs of label corners (and
point pairs) around the circle cuts it into open intervals on which the
optimum is constant, so one solve per interval suffices.  Critical
directions that are not slopes between two points are solved too, as
degenerate intervals; point-pair slopes are excluded by the general-position
assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Callable, Iterable

from .geometry import Direction, Point
from .model import Instance, SolveResult
from .solver_general import solve_general


def _half(d: Direction) -> int:
    # angle coordinates: (cos t, sin t) is proportional to (-dx, dy)
    cx, sy = -d.dx, d.dy
    return 0 if sy > 0 or (sy == 0 and cx > 0) else 1


def compare_angle(a: Direction, b: Direction) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    c = (-a.dx) * b.dy - a.dy * (-b.dx)
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_by_angle(dirs: Iterable[Direction]) -> list[Direction]:
    return sorted(set(dirs), key=cmp_to_key(compare_angle))


def _corners(inst: Instance) -> list[Point]:
    out = []
    for i in range(inst.n):
        out.extend(inst.label(i).corners())
    return out


def critical_directions(inst: Instance, include_points: bool = True) -> list[Direction]:
    """Directions (both orientations) through every pair of distinct label corners.

    Point pairs are added when ``include_points`` is set (they are corner
    pairs already for lower-left anchors, so this never adds anything for
    plain instances).  With obstacles or a custom map, directions from each
    point to every obstacle or map vertex are added as well, since a leader
    segment's contact with them changes there.
    """
    corners = sorted(set(_corners(inst)))
    dirs: set[Direction] = set()

    def add(p: Point, q: Point):
        if p != q:
            d = Direction.of(q.x - p.x, q.y - p.y)
            dirs.add(d)
            dirs.add(d.negated())

    for a in range(len(corners)):
        for b in range(a + 1, len(corners)):
            add(corners[a], corners[b])
    if include_points:
        for a in range(inst.n):
            for b in range(a + 1, inst.n):
                add(inst.points[a], inst.points[b])
    extra = [v for poly in inst.obstacles for v in poly]
    if inst.obstacles and inst.map_polygon is not None:
        extra += list(inst.map_polygon)
    for p in inst.points:
        for v in extra:
            add(p, v)
    return sort_by_angle(dirs)


def point_pair_directions(inst: Instance) -> set[Direction]:
    """Directions along which two leaders would be collinear (excluded as degenerate)."""
    out = set()
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            p, q = inst.points[a], inst.points[b]
            d = Direction.of(q.x - p.x, q.y - p.y)
            out.add(d)
            out.add(d.negated())
    return out


def interval_bound(n: int) -> int:
    """Upper bound on the number of open intervals for n points."""
    c4 = 4 * n * (4 * n - 1) // 2
    c1 = n * (n - 1) // 2
    return 2 * c4 + 2 * c1 + 1


@dataclass(frozen=True)
class SlopeInterval:
    lo: Direction
    hi: Direction
    representative: Direction
    value: int

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi


def interior_direction(lo: Direction, hi: Direction, a: int = 1, b: int = 1) -> Direction:
    """Exact direction strictly between two angularly adjacent directions."""
    return Direction.of(a * lo.dx + b * hi.dx, a * lo.dy + b * hi.dy)


@dataclass
class SweepResult:
    intervals: list[SlopeInterval]  # open intervals, in angle order
    boundaries: list[SlopeInterval]  # critical directions that are not point-pair slopes
    best: SlopeInterval

    @property
    def best_direction(self) -> Direction:
        return self.best.representative


Solver = Callable[[Instance], SolveResult]


def sweep_solve(inst: Instance, solver: Solver = solve_general, boundaries: bool = True) -> SweepResult:
    """Solve once per interval (and per critical direction) and keep the best.

    Ties go to the first candidate in angle order starting at angle 0, open
    intervals before the boundary direction that ends them.
    """
    crit = critical_directions(inst)
    through_points = point_pair_directions(inst)
    intervals: list[SlopeInterval] = []
    bounds: list[SlopeInterval] = []
    m = len(crit)
    for k in range(m):
        lo, hi = crit[k], crit[(k + 1) % m]
        rep = interior_direction(lo, hi)
        value = solver(inst.with_direction(rep)).optimum
        intervals.append(SlopeInterval(lo, hi, rep, value))
        if boundaries and hi not in through_points:
            value = solver(inst.with_direction(hi)).optimum
            bounds.append(SlopeInterval(hi, hi, hi, value))
    candidates = []
    by_dir = {b.lo: b for b in bounds}
    for k in range(m):
        candidates.append(intervals[k])
        if intervals[k].hi in by_dir:
            candidates.append(by_dir[intervals[k].hi])
    best = candidates[0]
    for c in candidates[1:]:
        if c.value > best.value:
            best = c
    return SweepResult(intervals, bounds, best)
