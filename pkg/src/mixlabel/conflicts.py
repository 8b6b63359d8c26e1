"""Pairwise conflict bitmasks shared by the dynamic programs."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import ray_hits_rect, rays_conflict
from .model import Instance
from .validity import label_blocked, leader_blocked


@dataclass
class ConflictTable:
    """Bitmask view of every pairwise rule, indexed by point position.

    ``ii[i]``: labels overlapping the label of i.  ``ei[i]``: labels hit by
    the leader of i.  ``ie[i]``: points whose leader hits the label of i.
    ``ee[i]``: leaders collinear with the leader of i.  ``can_int`` and
    ``can_ext`` record unary restrictions (obstacles, caller-forced statuses).
    """

    n: int
    ii: list[int]
    ei: list[int]
    ie: list[int]
    ee: list[int]
    can_int: int
    can_ext: int

    @classmethod
    def build(
        cls,
        inst: Instance,
        order: list[int] | None = None,
        must_internal=frozenset(),
        must_external=frozenset(),
    ) -> "ConflictTable":
        """Build the table; ``order[k]`` is the instance index stored at bit k."""
        n = inst.n
        order = list(range(n)) if order is None else order
        pts = [inst.points[i] for i in order]
        w, h = inst.w, inst.h
        labels = [inst.label(i) for i in order]
        rays = [inst.leader(i) for i in order]
        ii = [0] * n
        ei = [0] * n
        ie = [0] * n
        ee = [0] * n
        for a in range(n):
            pa = pts[a]
            for b in range(a + 1, n):
                pb = pts[b]
                if abs(pa.x - pb.x) < w and abs(pa.y - pb.y) < h:
                    ii[a] |= 1 << b
                    ii[b] |= 1 << a
                if rays_conflict(rays[a], rays[b]):
                    ee[a] |= 1 << b
                    ee[b] |= 1 << a
            for b in range(n):
                if a != b and ray_hits_rect(rays[a], labels[b]):
                    ei[a] |= 1 << b
                    ie[b] |= 1 << a
        full = (1 << n) - 1
        can_int = full
        can_ext = full
        for k, i in enumerate(order):
            if i in must_external or (inst.obstacles and label_blocked(inst, i)):
                can_int &= ~(1 << k)
            if i in must_internal or (inst.obstacles and leader_blocked(inst, i)):
                can_ext &= ~(1 << k)
        return cls(n, ii, ei, ie, ee, can_int, can_ext)

    def conflict(self, a: int, sa: int, b: int, sb: int) -> bool:
        table = (self.ii, self.ie, self.ei, self.ee)[2 * sa + sb]
        return bool(table[a] >> b & 1)

    def reach(self, a: int, sa: int) -> int:
        """Everything that point a with status sa could conflict with."""
        if sa == 0:
            return self.ii[a] | self.ie[a]
        return self.ei[a] | self.ee[a]


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
