"""Exact geometric primitives: points, directions, unit labels and leader rays.

All coordinates are :class:`fractions.Fraction`.  Intersection predicates use
open interiors, so labels that share an edge or a corner do not overlap and a
leader that grazes a label boundary does not hit it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Fraction
Number = Union[int, float, str, Fraction]

# Rational approximations of cos/sin are bounded by 1/THETA_DENOMINATOR per
# component, well inside the 1e-12 relative error budget for unit vectors.
THETA_DENOMINATOR = 10**13


def as_scalar(value: Number) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Strings are parsed as decimals or ``p/q``.  Floats are converted to the
    exact binary value they hold.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a scalar")


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number, y: Number) -> "Point":
        return cls(as_scalar(x), as_scalar(y))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, k: Fraction) -> "Point":
        return Point(self.x * k, self.y * k)

    def __iter__(self):
        yield self.x
        yield self.y


def cross(ax: Fraction, ay: Fraction, bx: Fraction, by: Fraction) -> Fraction:
    return ax * by - ay * bx


@dataclass(frozen=True)
class Direction:
    """A nonzero direction stored as a primitive integer vector."""

    dx: int
    dy: int

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise ValueError("direction must be nonzero")
        if not isinstance(self.dx, int) or not isinstance(self.dy, int):
            raise TypeError("use Direction.of() for non-integer components")
        if math.gcd(self.dx, self.dy) != 1:
            raise ValueError("direction components must be coprime; use Direction.of()")

    @classmethod
    def of(cls, dx: Number, dy: Number) -> "Direction":
        fx, fy = as_scalar(dx), as_scalar(dy)
        if fx == 0 and fy == 0:
            raise ValueError("direction must be nonzero")
        scale = math.lcm(fx.denominator, fy.denominator)
        ix, iy = int(fx * scale), int(fy * scale)
        g = math.gcd(ix, iy)
        return cls(ix // g, iy // g)

    def angle(self) -> float:
        """Clockwise angle from the negative x-axis, in [0, 2*pi)."""
        # d = (-cos t, sin t)  =>  t = atan2(dy, -dx)
        t = math.atan2(self.dy, -self.dx)
        return t % (2 * math.pi)

    def negated(self) -> "Direction":
        return Direction(-self.dx, -self.dy)

    def __str__(self) -> str:
        return f"{self.dx},{self.dy}"


LEFT = Direction(-1, 0)
RIGHT = Direction(1, 0)
UP = Direction(0, 1)
DOWN = Direction(0, -1)


def direction_from_theta(theta: float) -> Direction:
    """Leader direction for the slope ``theta`` (radians, clockwise from -x).

    The travel direction is ``(-cos theta, sin theta)``.  The four axis angles
    map exactly; every other angle is approximated componentwise with error at
    most ``1 / THETA_DENOMINATOR``.
    """
    theta = float(theta)
    if not (0.0 <= theta < 2 * math.pi) or math.isnan(theta):
        raise ValueError(f"theta must lie in [0, 2*pi), got {theta!r}")
    exact = {0.0: LEFT, math.pi / 2: UP, math.pi: RIGHT, 3 * math.pi / 2: DOWN}
    if theta in exact:
        return exact[theta]
    cx = Fraction(-math.cos(theta)).limit_denominator(THETA_DENOMINATOR)
    cy = Fraction(math.sin(theta)).limit_denominator(THETA_DENOMINATOR)
    return Direction.of(cx, cy)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by its lower-left corner."""

    anchor: Point
    w: Fraction = Fraction(1)
    h: Fraction = Fraction(1)

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError("rectangle sides must be positive")

    @property
    def x0(self) -> Fraction:
        return self.anchor.x

    @property
    def y0(self) -> Fraction:
        return self.anchor.y

    @property
    def x1(self) -> Fraction:
        return self.anchor.x + self.w

    @property
    def y1(self) -> Fraction:
        return self.anchor.y + self.h

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (
            Point(self.x0, self.y0),
            Point(self.x1, self.y0),
            Point(self.x1, self.y1),
            Point(self.x0, self.y1),
        )

    def contains_closed(self, p: Point) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def contains_open(self, p: Point) -> bool:
        return self.x0 < p.x < self.x1 and self.y0 < p.y < self.y1


@dataclass(frozen=True)
class LeaderRay:
    origin: Point
    dir: Direction


def label_of(p: Point, w: Fraction = Fraction(1), h: Fraction = Fraction(1)) -> Rect:
    return Rect(p, w, h)


def rects_overlap(a: Rect, b: Rect) -> bool:
    """True iff the open interiors of ``a`` and ``b`` intersect."""
    return a.x0 < b.x1 and b.x0 < a.x1 and a.y0 < b.y1 and b.y0 < a.y1


def _open_slab_params(o: Fraction, d: int, lo: Fraction, hi: Fraction):
    """Parameter interval (t_lo, t_hi) where lo < o + t*d < hi, or None if empty."""
    if d == 0:
        return (None, None) if lo < o < hi else None
    a = (lo - o) / d
    b = (hi - o) / d
    return (a, b) if a < b else (b, a)


def ray_hits_rect(r: LeaderRay, t: Rect) -> bool:
    """True iff the ray meets the open interior of ``t``."""
    lo = Fraction(0)
    hi = None
    for o, d, a, b in (
        (r.origin.x, r.dir.dx, t.x0, t.x1),
        (r.origin.y, r.dir.dy, t.y0, t.y1),
    ):
        span = _open_slab_params(o, d, a, b)
        if span is None:
            return False
        s_lo, s_hi = span
        if s_lo is None:
            continue
        lo = max(lo, s_lo)
        hi = s_hi if hi is None else min(hi, s_hi)
    return hi is None or lo < hi


def ray_through_point(r: LeaderRay, q: Point) -> bool:
    """True iff ``q`` lies on the ray (origin excluded)."""
    vx, vy = q.x - r.origin.x, q.y - r.origin.y
    if vx == 0 and vy == 0:
        return False
    return cross(vx, vy, r.dir.dx, r.dir.dy) == 0 and vx * r.dir.dx + vy * r.dir.dy > 0


def rays_conflict(a: LeaderRay, b: LeaderRay) -> bool:
    """True iff two parallel same-direction rays share more than a point."""
    if a.dir != b.dir:
        raise ValueError("leaders must share the instance direction")
    vx, vy = b.origin.x - a.origin.x, b.origin.y - a.origin.y
    return cross(vx, vy, a.dir.dx, a.dir.dy) == 0


# --- polygons (map outline and obstacles) ---------------------------------


def polygon_area2(poly: Sequence[Point]) -> Fraction:
    """Twice the signed area (positive for counterclockwise)."""
    s = Fraction(0)
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        s += a.x * b.y - a.y * b.x
    return s


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if cross(b.x - a.x, b.y - a.y, p.x - a.x, p.y - a.y) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def point_on_boundary(p: Point, poly: Sequence[Point]) -> bool:
    n = len(poly)
    return any(_on_segment(p, poly[i], poly[(i + 1) % n]) for i in range(n))


def point_in_polygon(p: Point, poly: Sequence[Point]) -> bool:
    """Strict interior test (boundary points are outside)."""
    if point_on_boundary(p, poly):
        return False
    inside = False
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if xint > p.x:
                inside = not inside
    return inside


def clip_polygon_to_rect(poly: Sequence[Point], r: Rect) -> list[Point]:
    """Sutherland-Hodgman clip of ``poly`` against the closed rectangle."""
    def clip(pts, inside, meet):
        out: list[Point] = []
        for i in range(len(pts)):
            cur, prev = pts[i], pts[i - 1]
            if inside(cur):
                if not inside(prev):
                    out.append(meet(prev, cur))
                out.append(cur)
            elif inside(prev):
                out.append(meet(prev, cur))
        return out

    def at_x(x0):
        def meet(a, b):
            t = (x0 - a.x) / (b.x - a.x)
            return Point(x0, a.y + t * (b.y - a.y))
        return meet

    def at_y(y0):
        def meet(a, b):
            t = (y0 - a.y) / (b.y - a.y)
            return Point(a.x + t * (b.x - a.x), y0)
        return meet

    pts = list(poly)
    for inside, meet in (
        (lambda p: p.x >= r.x0, at_x(r.x0)),
        (lambda p: p.x <= r.x1, at_x(r.x1)),
        (lambda p: p.y >= r.y0, at_y(r.y0)),
        (lambda p: p.y <= r.y1, at_y(r.y1)),
    ):
        if not pts:
            break
        pts = clip(pts, inside, meet)
    return pts


def rect_meets_polygon(r: Rect, poly: Sequence[Point]) -> bool:
    """True iff the open rectangle and the open polygon share positive area."""
    clipped = clip_polygon_to_rect(poly, r)
    return len(clipped) >= 3 and polygon_area2(clipped) != 0


def _segment_params(p: Point, q: Point, a: Point, b: Point) -> list[Fraction]:
    """Parameters t in [0,1] along p->q where it touches segment a-b."""
    rx, ry = q.x - p.x, q.y - p.y
    sx, sy = b.x - a.x, b.y - a.y
    den = cross(rx, ry, sx, sy)
    wx, wy = a.x - p.x, a.y - p.y
    if den == 0:
        if cross(wx, wy, rx, ry) != 0:
            return []
        rr = rx * rx + ry * ry
        ts = [(wx * rx + wy * ry) / rr, ((b.x - p.x) * rx + (b.y - p.y) * ry) / rr]
        return [t for t in ts if 0 <= t <= 1]
    t = cross(wx, wy, sx, sy) / den
    u = cross(wx, wy, rx, ry) / den
    if 0 <= t <= 1 and 0 <= u <= 1:
        return [t]
    return []


def segment_meets_polygon(p: Point, q: Point, poly: Sequence[Point]) -> bool:
    """True iff segment p-q passes through the open interior of ``poly``."""
    ts = {Fraction(0), Fraction(1)}
    n = len(poly)
    for i in range(n):
        ts.update(_segment_params(p, q, poly[i], poly[(i + 1) % n]))
    ordered = sorted(ts)
    for t0, t1 in zip(ordered, ordered[1:]):
        tm = (t0 + t1) / 2
        m = Point(p.x + tm * (q.x - p.x), p.y + tm * (q.y - p.y))
        if point_in_polygon(m, poly):
            return True
    return False


def bounding_box(points: Iterable[Point]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    pts = list(points)
    return (
        min(p.x for p in pts),
        min(p.y for p in pts),
        max(p.x for p in pts),
        max(p.y for p in pts),
    )
