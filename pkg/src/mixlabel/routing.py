"""Inner leader clipping and outer leader routing around the map boundary.

External labels sit outside the map.  Each one is reached by the inner
leader (from the point to the map boundary, in the leader direction) and a
horizontal outer leader (possibly of zero length).  Labels are placed one by
one in counterclockwise boundary order, starting with the topmost exit; a
label that would overlap an already placed one slides outward horizontally
to the first position where it overlaps none.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import Direction, Point, Rect, cross, rects_overlap
from .model import Instance, Labeling, Polygon, is_convex_ccw
from .regions import Frame


class RoutingError(ValueError):
    pass


def ray_exit(origin: Point, d: Direction, poly: Sequence[Point]) -> Point:
    """Where the ray from an interior point leaves a convex polygon."""
    best = None
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        sx, sy = b.x - a.x, b.y - a.y
        den = cross(d.dx, d.dy, sx, sy)
        if den == 0:
            continue
        wx, wy = a.x - origin.x, a.y - origin.y
        t = cross(wx, wy, sx, sy) / den
        s = cross(wx, wy, d.dx, d.dy) / den
        if t > 0 and 0 <= s <= 1 and (best is None or t < best):
            best = t
    if best is None:
        raise RoutingError("leader does not leave the map")
    return Point(origin.x + best * d.dx, origin.y + best * d.dy)


def _strictly_inside_convex(p: Point, poly: Sequence[Point]) -> bool:
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        if cross(b.x - a.x, b.y - a.y, p.x - a.x, p.y - a.y) <= 0:
            return False
    return True


def clip_leader_to_map(inst: Instance, i: int, map_polygon: Polygon | None = None) -> Point:
    poly = map_polygon if map_polygon is not None else inst.map_or_default()
    p = inst.points[i]
    if not _strictly_inside_convex(p, poly):
        raise RoutingError(f"point {i} is not strictly inside the map")
    return ray_exit(p, inst.direction, poly)


@dataclass(frozen=True)
class RoutedExternal:
    index: int
    boundary_exit: Point
    outer_path: tuple[Point, Point]
    label_rect: Rect


@dataclass
class RoutingReport:
    routed: list[RoutedExternal]
    # (routed label index, earlier label index) where the outer segment of the
    # first touches the interior of the second's label
    segment_contacts: list[tuple[int, int]]


def leftward_class(d: Direction) -> bool:
    """True when external labels go to the left (slopes in [0, pi/2] or [3pi/2, 2pi))."""
    # -dx is proportional to cos(theta)
    return -d.dx > 0 or d.dx == 0


def _boundary_position(p: Point, poly: Sequence[Point]) -> tuple[int, Fraction]:
    """(edge index, parameter along edge) of a boundary point."""
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        sx, sy = b.x - a.x, b.y - a.y
        if cross(sx, sy, p.x - a.x, p.y - a.y) != 0:
            continue
        t = ((p.x - a.x) * sx + (p.y - a.y) * sy) / (sx * sx + sy * sy)
        if 0 <= t < 1:
            return k, t
    raise RoutingError("point is not on the map boundary")


def route_outer(inst: Instance, labeling: Labeling, map_polygon: Polygon | None = None) -> RoutingReport:
    poly = map_polygon if map_polygon is not None else inst.map_or_default()
    if not is_convex_ccw(poly):
        raise RoutingError("map polygon must be convex and counterclockwise")
    frame = Frame(inst.direction)
    exits = {i: clip_leader_to_map(inst, i, poly) for i in sorted(labeling.external)}
    if not exits:
        return RoutingReport([], [])
    left = leftward_class(inst.direction)
    # counterclockwise order around the boundary, starting at the topmost exit
    pos = {i: _boundary_position(e, poly) for i, e in exits.items()}
    top = max(exits, key=lambda i: (frame.fy(exits[i]), -i))
    ordered = sorted(exits, key=lambda i: pos[i])
    k = ordered.index(top)
    ordered = ordered[k:] + ordered[:k]
    if not left:
        # mirrored procedure walks the boundary the other way round
        ordered = [ordered[0]] + ordered[1:][::-1]

    w, h = inst.w, inst.h
    routed: list[RoutedExternal] = []
    contacts: list[tuple[int, int]] = []
    for i in ordered:
        ex = exits[i]
        x0 = ex.x - w if left else ex.x
        rect = Rect(Point(x0, ex.y), w, h)
        while True:
            hit = [r.label_rect for r in routed if rects_overlap(rect, r.label_rect)]
            if not hit:
                break
            x0 = min(r.x0 for r in hit) - w if left else max(r.x1 for r in hit)
            rect = Rect(Point(x0, ex.y), w, h)
        end = Point(rect.x1, ex.y) if left else Point(rect.x0, ex.y)
        for r in routed:
            lo, hi = min(ex.x, end.x), max(ex.x, end.x)
            if r.label_rect.y0 < ex.y < r.label_rect.y1 and lo < r.label_rect.x1 and r.label_rect.x0 < hi:
                contacts.append((i, r.index))
        routed.append(RoutedExternal(i, ex, (ex, end), rect))
    return RoutingReport(routed, contacts)
