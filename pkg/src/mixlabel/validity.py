"""Validity of mixed labelings and the feasibility counter used by the solvers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Optional, Union

from .geometry import (
    LeaderRay,
    Point,
    ray_hits_rect,
    rays_conflict,
    rect_meets_polygon,
    segment_meets_polygon,
)
from .model import Instance, Labeling


@total_ordering
class _NegInf:
    """Absorbing bottom element for counts."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("NEG_INFINITY")

    def __repr__(self):
        return "NEG_INFINITY"


NEG_INFINITY = _NegInf()
Count = Union[int, _NegInf]


class ViolationKind(enum.Enum):
    LABEL_LABEL = "label-label"
    LEADER_LABEL = "leader-label"
    LEADER_LEADER = "leader-leader"
    LABEL_OBSTACLE = "label-obstacle"
    LEADER_OBSTACLE = "leader-obstacle"
    INSIDE_OBSTACLE = "point-inside-obstacle"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    first: int
    second: Optional[int] = None

    def describe(self) -> str:
        if self.second is None:
            return f"{self.kind.value}: point {self.first}"
        return f"{self.kind.value}: points {self.first} and {self.second}"


INT, EXT = 0, 1


def pair_conflict(inst: Instance, i: int, si: int, j: int, sj: int) -> Optional[ViolationKind]:
    """Conflict kind between point i with status si and point j with status sj."""
    if si == INT and sj == INT:
        if _overlap(inst, i, j):
            return ViolationKind.LABEL_LABEL
        return None
    if si == EXT and sj == EXT:
        if rays_conflict(inst.leader(i), inst.leader(j)):
            return ViolationKind.LEADER_LEADER
        return None
    e, t = (i, j) if si == EXT else (j, i)
    if ray_hits_rect(inst.leader(e), inst.label(t)):
        return ViolationKind.LEADER_LABEL
    return None


def _overlap(inst: Instance, i: int, j: int) -> bool:
    a, b = inst.points[i], inst.points[j]
    return abs(a.x - b.x) < inst.w and abs(a.y - b.y) < inst.h


def leader_segment_end(inst: Instance, i: int) -> Point:
    """Far end of the inner leader, used for obstacle tests."""
    from .routing import clip_leader_to_map

    return clip_leader_to_map(inst, i)


def label_blocked(inst: Instance, i: int) -> bool:
    return any(rect_meets_polygon(inst.label(i), poly) for poly in inst.obstacles)


def leader_blocked(inst: Instance, i: int) -> bool:
    if not inst.obstacles:
        return False
    end = leader_segment_end(inst, i)
    return any(segment_meets_polygon(inst.points[i], end, poly) for poly in inst.obstacles)


def find_violation(inst: Instance, labeling: Labeling) -> Optional[Violation]:
    """First violated rule, scanning points in index order; None if valid."""
    labeling.check_partition(inst.n)
    from .geometry import point_in_polygon

    status = [INT if i in labeling.internal else EXT for i in range(inst.n)]
    for i in range(inst.n):
        for poly in inst.obstacles:
            if point_in_polygon(inst.points[i], poly):
                return Violation(ViolationKind.INSIDE_OBSTACLE, i)
        if inst.obstacles:
            if status[i] == INT and label_blocked(inst, i):
                return Violation(ViolationKind.LABEL_OBSTACLE, i)
            if status[i] == EXT and leader_blocked(inst, i):
                return Violation(ViolationKind.LEADER_OBSTACLE, i)
        for j in range(i + 1, inst.n):
            kind = pair_conflict(inst, i, status[i], j, status[j])
            if kind is not None:
                return Violation(kind, i, j)
    return None


def is_valid(inst: Instance, labeling: Labeling) -> tuple[bool, Optional[Violation]]:
    v = find_violation(inst, labeling)
    return v is None, v


@dataclass(frozen=True)
class PsiContext:
    """Fixed surroundings of a feasibility query.

    ``labels`` are points known to be labeled internally, ``leaders`` points
    known to be labeled externally.  Extra leader rays (for example dummy
    anchors given only as rays) go into ``rays``.
    """

    labels: frozenset[int] = frozenset()
    leaders: frozenset[int] = frozenset()
    rays: tuple[LeaderRay, ...] = ()

    def __post_init__(self):
        if self.labels & self.leaders:
            raise ValueError("context labels and leaders must be disjoint")


def psi(inst: Instance, P: Iterable[int], ctx: PsiContext = PsiContext()) -> Count:
    """|P| if P can be labeled internally alongside the context, else NEG_INFINITY."""
    pts = sorted(set(P))
    labels = sorted(set(pts) | ctx.labels)
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            if _overlap(inst, labels[a], labels[b]):
                return NEG_INFINITY
    for e in ctx.leaders:
        ray = inst.leader(e)
        if any(ray_hits_rect(ray, inst.label(t)) for t in labels):
            return NEG_INFINITY
    for ray in ctx.rays:
        if any(ray_hits_rect(ray, inst.label(t)) for t in labels):
            return NEG_INFINITY
    return len(pts)
