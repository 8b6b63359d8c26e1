"""Rotated leader frame, slab classification and influence regions.

In the frame of a leader direction ``d`` every leader travels towards
decreasing frame-x, so "right", "left", "above" and "below" keep their
meaning from the horizontal case.  Frame coordinates are the linear
functionals ``fx(p) = -<p, d>`` and ``fy(p) = <p, (dy, -dx)>``; they are
scaled by ``|d|`` which is harmless because only comparisons are used.

Influence-region membership is decided by an exact feasibility test over the
position of a hypothetical witness label, never by a hand-written per-angle
case list.  The per-angle size tables are kept only as reference values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Direction, LeaderRay, Point, Rect, ray_hits_rect


@dataclass(frozen=True)
class Frame:
    dir: Direction

    def fx(self, p: Point) -> Fraction:
        return -(p.x * self.dir.dx + p.y * self.dir.dy)

    def fy(self, p: Point) -> Fraction:
        return p.x * self.dir.dy - p.y * self.dir.dx

    def key(self, p: Point) -> tuple[Fraction, Fraction]:
        return self.fx(p), self.fy(p)

    def leader(self, p: Point) -> LeaderRay:
        return LeaderRay(p, self.dir)


class SlabClass(enum.Enum):
    IN_S = "in_s"
    IN_CLOSED_SLAB_RIGHT = "in_closed_slab_right_of_both"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class SlabQuery:
    ell: Point
    u: Point
    frame: Frame

    def __post_init__(self):
        if not self.frame.fy(self.ell) < self.frame.fy(self.u):
            raise ValueError("slab needs fy(ell) < fy(u)")


def in_slab(p: Point, q: SlabQuery) -> SlabClass:
    f = q.frame
    y = f.fy(p)
    if not (f.fy(q.ell) < y < f.fy(q.u)):
        return SlabClass.OUTSIDE
    x = f.fx(p)
    if x < f.fx(q.ell) and x < f.fx(q.u):
        return SlabClass.IN_S
    return SlabClass.IN_CLOSED_SLAB_RIGHT


class RegionKind(enum.Enum):
    BOTTOM_LABEL = "E"
    BOTTOM_LEADER = "E'"
    BOTTOM_LEADER_ONLY = "E''"
    TOP_LABEL = "F"
    TOP_LEADER = "F'"
    TOP_LEADER_ONLY = "F''"

    @property
    def is_bottom(self) -> bool:
        return self in (RegionKind.BOTTOM_LABEL, RegionKind.BOTTOM_LEADER, RegionKind.BOTTOM_LEADER_ONLY)


# --- exact feasibility of strict/non-strict linear systems in two unknowns ---

# A constraint (ca, cb, c0, strict) encodes ca*a + cb*b + c0 < 0 (strict) or <= 0.
Constraint = tuple[Fraction, Fraction, Fraction, bool]


def _eliminate(rows: list[Constraint], var: int) -> list[Constraint]:
    pos, neg, rest = [], [], []
    for r in rows:
        c = r[var]
        (pos if c > 0 else neg if c < 0 else rest).append(r)
    out = list(rest)
    for p in pos:
        for n in neg:
            kp, kn = -n[var], p[var]
            out.append((
                kp * p[0] + kn * n[0],
                kp * p[1] + kn * n[1],
                kp * p[2] + kn * n[2],
                p[3] or n[3],
            ))
    return out


def feasible(rows: Iterable[Constraint]) -> bool:
    """Fourier-Motzkin feasibility over the reals, strictness tracked exactly."""
    rows = _eliminate(_eliminate(list(rows), 0), 1)
    for _, _, c0, strict in rows:
        if strict and not c0 < 0:
            return False
        if not strict and not c0 <= 0:
            return False
    return True


def _lt(ca, cb, rhs) -> Constraint:  # ca*a + cb*b < rhs
    return (Fraction(ca), Fraction(cb), -Fraction(rhs), True)


def _le(ca, cb, rhs) -> Constraint:  # ca*a + cb*b <= rhs
    return (Fraction(ca), Fraction(cb), -Fraction(rhs), False)


def _gt(ca, cb, rhs) -> Constraint:
    return _lt(-ca, -cb, -Fraction(rhs))


def _ge(ca, cb, rhs) -> Constraint:
    return _le(-ca, -cb, -Fraction(rhs))


def _corner_offsets(frame: Frame, w: Fraction, h: Fraction) -> list[Fraction]:
    """fy offsets of the label corners relative to its anchor."""
    d = frame.dir
    return [Fraction(0), w * d.dy, -h * d.dx, w * d.dy - h * d.dx]


def _not_hit_options(frame: Frame, origin: Point, w: Fraction, h: Fraction) -> list[Constraint]:
    """Separating-axis disjuncts (in the label anchor a, b) for 'ray misses label'."""
    d = frame.dir
    offs = _corner_offsets(frame, w, h)
    c = frame.fy(origin)
    # fy(anchor) = dy*a - dx*b
    opts = [
        _le(d.dy, -d.dx, c - max(offs)),
        _ge(d.dy, -d.dx, c - min(offs)),
    ]
    if d.dx <= 0:
        opts.append(_ge(1, 0, origin.x))
    if d.dx >= 0:
        opts.append(_le(1, 0, origin.x - w))
    if d.dy <= 0:
        opts.append(_ge(0, 1, origin.y))
    if d.dy >= 0:
        opts.append(_le(0, 1, origin.y - h))
    return opts


def _ray_hits_label_at(frame: Frame, origin: Point, w: Fraction, h: Fraction) -> list[Constraint]:
    """Conjunction (in the label anchor a, b) for 'ray from origin hits label'."""
    d = frame.dir
    offs = _corner_offsets(frame, w, h)
    c = frame.fy(origin)
    rows = [
        _lt(d.dy, -d.dx, c - min(offs)),
        _gt(d.dy, -d.dx, c - max(offs)),
    ]
    if d.dx < 0:
        rows.append(_lt(1, 0, origin.x))
    elif d.dx > 0:
        rows.append(_gt(1, 0, origin.x - w))
    else:
        rows += [_lt(1, 0, origin.x), _gt(1, 0, origin.x - w)]
    if d.dy < 0:
        rows.append(_lt(0, 1, origin.y))
    elif d.dy > 0:
        rows.append(_gt(0, 1, origin.y - h))
    else:
        rows += [_lt(0, 1, origin.y), _gt(0, 1, origin.y - h)]
    return rows


def _labels_overlap_at(q: Point, w: Fraction, h: Fraction) -> list[Constraint]:
    return [
        _lt(1, 0, q.x + w),
        _gt(1, 0, q.x - w),
        _lt(0, 1, q.y + h),
        _gt(0, 1, q.y - h),
    ]


def in_influence_region(
    q: Point,
    anchor: Point,
    kind: RegionKind,
    frame: Frame,
    w: Fraction = Fraction(1),
    h: Fraction = Fraction(1),
) -> bool:
    """Whether ``q`` lies in the influence region ``kind`` of ``anchor``.

    A witness label position ``x`` must be frame-left of the anchor, strictly
    on the slab side of the anchor's leader line and not hit by the anchor's
    leader; the label (or, for leader kinds, the leader) of ``q`` must reach
    the label at ``x``.
    """
    if kind is RegionKind.BOTTOM_LEADER_ONLY:
        return in_influence_region(q, anchor, RegionKind.BOTTOM_LEADER, frame, w, h) and not (
            in_influence_region(q, anchor, RegionKind.BOTTOM_LABEL, frame, w, h)
        )
    if kind is RegionKind.TOP_LEADER_ONLY:
        return in_influence_region(q, anchor, RegionKind.TOP_LEADER, frame, w, h) and not (
            in_influence_region(q, anchor, RegionKind.TOP_LABEL, frame, w, h)
        )
    d = frame.dir
    fy_a, fx_a = frame.fy(anchor), frame.fx(anchor)
    bottom = kind.is_bottom
    fy_q = frame.fy(q)
    if bottom and not fy_q < fy_a:
        return False
    if not bottom and not fy_q > fy_a:
        return False
    leader = frame.leader(anchor)
    base = [
        # witness is frame-left of the anchor: -(dx*a + dy*b) < fx(anchor)
        _lt(-d.dx, -d.dy, fx_a),
        # and strictly on the far side of the anchor's leader line
        _gt(d.dy, -d.dx, fy_a) if bottom else _lt(d.dy, -d.dx, fy_a),
    ]
    if kind in (RegionKind.BOTTOM_LABEL, RegionKind.TOP_LABEL):
        if ray_hits_rect(leader, Rect(q, w, h)):
            return False
        base += _labels_overlap_at(q, w, h)
    else:
        base += _ray_hits_label_at(frame, q, w, h)
    return any(feasible(base + [opt]) for opt in _not_hit_options(frame, anchor, w, h))


# --- per-orientation reference tables -------------------------------------


def octant(d: Direction) -> tuple[str, int]:
    """Exact position of the slope: ('at', k) for k*pi/4, ('in', k) for the open octant after it."""
    c, s = -d.dx, d.dy  # proportional to (cos t, sin t)
    if s == 0:
        return ("at", 0 if c > 0 else 4)
    if c == 0:
        return ("at", 2 if s > 0 else 6)
    if s == c:
        return ("at", 1 if s > 0 else 5)
    if s == -c:
        return ("at", 3 if s > 0 else 7)
    if s > 0:
        if c > 0:
            return ("in", 0 if s < c else 1)
        return ("in", 2 if s > -c else 3)
    if c < 0:
        return ("in", 4 if -s < -c else 5)
    return ("in", 6 if -s > c else 7)


_E = {
    ("at", 0): 1, ("in", 0): 2, ("at", 1): 1, ("in", 1): 1, ("at", 2): 0, ("in", 2): 1,
    ("at", 3): 0, ("in", 3): 0, ("at", 4): 0, ("in", 4): 0, ("at", 5): 0, ("in", 5): 1,
    ("at", 6): 0, ("in", 6): 3, ("at", 7): 2, ("in", 7): 2,
}
_F = {
    ("at", 0): 0, ("in", 0): 1, ("at", 1): 0, ("in", 1): 0, ("at", 2): 0, ("in", 2): 0,
    ("at", 3): 0, ("in", 3): 1, ("at", 4): 0, ("in", 4): 1, ("at", 5): 1, ("in", 5): 2,
    ("at", 6): 1, ("in", 6): 2, ("at", 7): 2, ("in", 7): 3,
}
_E_PRIME = {("in", 5), ("in", 6), ("at", 7), ("in", 7)}
_F_PRIME = {("in", 0), ("in", 3)} | {(k, i) for i in range(4, 8) for k in ("at", "in")}


@dataclass(frozen=True)
class OrientationExponents:
    e: int
    f: int
    e_prime: int
    f_prime: int

    @property
    def e_star(self) -> int:
        return min(1, self.e)

    @property
    def f_star(self) -> int:
        return min(1, self.f)


def exponents_for(frame: Frame) -> OrientationExponents:
    pos = octant(frame.dir)
    return OrientationExponents(
        e=_E[pos],
        f=_F[pos],
        e_prime=int(pos in _E_PRIME),
        f_prime=int(pos in _F_PRIME),
    )


def region_members(
    points: Sequence[Point], anchor_index: int, kind: RegionKind, frame: Frame
) -> list[int]:
    anchor = points[anchor_index]
    return [
        i
        for i, q in enumerate(points)
        if i != anchor_index and in_influence_region(q, anchor, kind, frame)
    ]
