"""Dynamic program for leaders that all point to the left.

A subproblem ``(ell, u, r)`` is bounded below and above by the leaders of
two external points.  Only one point outside the band can still reach into
it: an internal point ``r`` lying in the unit square hanging below-right of
``ell``.  The frame-rightmost external point of a subproblem splits it into
two smaller ones; everything to its right is internal.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .conflicts import ConflictTable, bits
from .geometry import LEFT, Point, bounding_box
from .model import Infeasible, Instance, Labeling, SolveResult
from .validity import find_violation

NONE = None


@dataclass(frozen=True)
class LeftDPKey:
    ell: int  # -1 is the dummy below everything
    u: int  # n is the dummy above everything
    r: Optional[int]


@dataclass(frozen=True)
class DummyPoints:
    """Far-away anchors closing the outermost subproblem.

    Both sit to the right of every point and label; ``p_plus_inf`` above and
    ``p_minus_inf`` below, so their leaders cross no candidate label.
    """

    p_plus_inf: Point
    p_minus_inf: Point

    @classmethod
    def for_instance(cls, inst: Instance) -> "DummyPoints":
        x0, y0, x1, y1 = bounding_box(inst.points)
        pad = Fraction(inst.n + 3) * max(Fraction(1), inst.w, inst.h)
        right = x1 + inst.w + pad
        return cls(Point(right, y1 + inst.h + pad), Point(right, y0 - inst.h - pad))


def in_unit_square_below(inst: Instance, p: Point, q: Point) -> bool:
    """Whether q lies in the square of label size hanging below-right of p.

    The left side is closed: a point straight below p still has its label
    right of p's leader and can touch labels left of p.
    """
    return p.x <= q.x < p.x + inst.w and p.y - inst.h < q.y < p.y


def topmost_in_unit_square(inst: Instance, p: Point) -> Optional[int]:
    """Index of the highest point in the square below-right of p, if any."""
    best = None
    for i, q in enumerate(inst.points):
        if q != p and in_unit_square_below(inst, p, q):
            if best is None or q.y > inst.points[best].y:
                best = i
    return best


def rho(inst: Instance, p: int, ell: Optional[int], r: Optional[int]) -> Optional[int]:
    """The one internal point below p that the part above p must respect.

    That is the topmost point of p's square lying above ``ell`` (internal by
    construction) or else ``r`` when it lies in p's square too.
    """
    pp = inst.points[p]
    q = topmost_in_unit_square(inst, pp)
    if q is not None and (ell is None or inst.points[q].y > inst.points[ell].y):
        return q
    if r is not None and in_unit_square_below(inst, pp, inst.points[r]):
        return r
    return None


def _check_left(inst: Instance) -> None:
    if inst.direction != LEFT:
        raise ValueError("the left solver needs leaders pointing left")
    ys = [p.y for p in inst.points]
    if len(set(ys)) != len(ys):
        raise ValueError("the left solver needs distinct y-coordinates")


@dataclass
class _LeftDP:
    inst: Instance
    t: ConflictTable
    xdesc: list[int]  # positions sorted right to left
    square_top: list[Optional[int]]  # topmost point in each point's square
    square: list[int]  # mask of points in each point's square
    left_of: list[int]  # mask of points frame-left of each point
    memo: dict = field(default_factory=dict)
    slabs: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.t.n

    def slab(self, ell: int, u: int):
        """(S mask, S right to left, closed-band remainder mask, remainder ok)."""
        key = (ell, u)
        got = self.slabs.get(key)
        if got is not None:
            return got
        n, t = self.n, self.t
        band = ((1 << u) - 1) & ~((1 << (ell + 1)) - 1)
        S = band
        for a in (ell, u):
            if 0 <= a < n:
                S &= self.left_of[a]
        C = band & ~S
        anchors = self._anchor_mask(ell, u)
        ok = True
        for q in bits(C):
            if not t.can_int >> q & 1 or t.ii[q] & C or t.ie[q] & anchors:
                ok = False
                break
        order = [q for q in self.xdesc if S >> q & 1]
        got = (S, order, C, ok)
        self.slabs[key] = got
        return got

    def _anchor_mask(self, ell: int, u: int) -> int:
        m = 0
        for a in (ell, u):
            if 0 <= a < self.n:
                m |= 1 << a
        return m

    def rho(self, p: int, ell: int, r: Optional[int]) -> Optional[int]:
        q = self.square_top[p]
        if q is not None and q > ell:  # positions are sorted by y
            return q
        if r is not None and self.square[p] >> r & 1:
            return r
        return None

    def solve(self, key: LeftDPKey) -> tuple[int, Optional[int]]:
        got = self.memo.get(key)
        if got is None:
            got = self._compute(key)
            self.memo[key] = got
        return got

    def _compute(self, key: LeftDPKey) -> tuple[int, Optional[int]]:
        """(value, split point or None for all-internal); value -1 means infeasible."""
        t = self.t
        ell, u, r = key.ell, key.u, key.r
        S, order, C, ok = self.slab(ell, u)
        if not ok:
            return -1, None
        anchors = self._anchor_mask(ell, u)
        fixed = C
        if r is not None:
            if not t.can_int >> r & 1 or t.ii[r] & C or t.ie[r] & anchors:
                return -1, None
            fixed |= 1 << r
        best, arg = -1, None
        R = 0
        count = 0
        for p in order:
            if t.can_ext >> p & 1:
                lo = self.solve(LeftDPKey(ell, p, r))[0]
                if lo >= 0:
                    hi = self.solve(LeftDPKey(p, u, self.rho(p, ell, r)))[0]
                    if hi >= 0 and count + lo + hi > best:
                        best, arg = count + lo + hi, p
            if not t.can_int >> p & 1 or t.ii[p] & (fixed | R) or t.ie[p] & anchors:
                return best, arg
            R |= 1 << p
            count += 1
        if count > best:
            best, arg = count, None
        return best, arg

    def collect(self, key: LeftDPKey, internal: set[int]) -> None:
        value, p = self.solve(key)
        if value < 0:
            raise AssertionError("reconstructing an infeasible subproblem")
        S, order, _, _ = self.slab(key.ell, key.u)
        if p is None:
            internal.update(order)
            return
        for q in order:
            if q == p:
                break
            internal.add(q)
        self.collect(LeftDPKey(key.ell, p, key.r), internal)
        self.collect(LeftDPKey(p, key.u, self.rho(p, key.ell, key.r)), internal)


def solve_left(
    inst: Instance, must_internal=frozenset(), must_external=frozenset()
) -> SolveResult:
    """Maximum number of internal labels when every leader points left.

    Needs distinct y-coordinates (collinear leaders are excluded by the
    general-position assumption); use the general solver otherwise.
    """
    _check_left(inst)
    n = inst.n
    order = sorted(range(n), key=lambda i: inst.points[i].y)
    pos = {i: k for k, i in enumerate(order)}
    table = ConflictTable.build(inst, order, must_internal, must_external)
    pts = [inst.points[i] for i in order]
    # right-to-left by x, ties broken so that the lower point counts as further right
    xdesc = sorted(range(n), key=lambda k: (pts[k].x, -pts[k].y), reverse=True)
    left_of = [0] * n
    acc = 0
    for k in reversed(xdesc):
        left_of[k] = acc
        acc |= 1 << k
    square = [0] * n
    square_top: list[Optional[int]] = [None] * n
    for k in range(n):
        for j in range(k - 1, -1, -1):
            if in_unit_square_below(inst, pts[k], pts[j]):
                square[k] |= 1 << j
                if square_top[k] is None:
                    square_top[k] = j
    dp = _LeftDP(inst, table, xdesc, square_top, square, left_of)
    root = LeftDPKey(-1, n, None)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        value, _ = dp.solve(root)
        if value < 0:
            raise Infeasible("no valid labeling exists")
        internal: set[int] = set()
        dp.collect(root, internal)
    finally:
        sys.setrecursionlimit(limit)
    labeling = Labeling.from_internal(n, (order[k] for k in internal))
    if labeling.count != value:
        raise AssertionError("witness size disagrees with the optimum")
    violation = find_violation(inst, labeling)
    if violation is not None:
        raise AssertionError(f"solver produced an invalid labeling: {violation.describe()}")
    return SolveResult(value, labeling, "left", {"cells": len(dp.memo), "slabs": len(dp.slabs)})


def psi_prime_table(inst: Instance, ell: Optional[int], u: Optional[int]) -> dict:
    """Feasibility counts of the suffixes of a subproblem.

    Maps ``(p, r)`` to the number of subproblem points strictly right of p
    when those labels, the band remainder and r's label fit together and
    avoid both bounding leaders, and to ``None`` (infeasible) otherwise.
    ``r`` ranges over the points in ell's square and ``None``.  Indices are
    instance indices; ``None`` anchors stand for the far dummies.
    """
    from .validity import NEG_INFINITY, PsiContext, psi

    _check_left(inst)
    ys = {i: inst.points[i].y for i in range(inst.n)}
    lo = ys[ell] if ell is not None else None
    hi = ys[u] if u is not None else None
    band = [i for i in range(inst.n) if (lo is None or ys[i] > lo) and (hi is None or ys[i] < hi)]

    def key(i):
        return (inst.points[i].x, -inst.points[i].y)

    lim = [key(a) for a in (ell, u) if a is not None]
    S = [i for i in band if all(key(i) < k for k in lim)]
    rest = frozenset(band) - frozenset(S)
    leaders = frozenset(a for a in (ell, u) if a is not None)
    rs = [None]
    if ell is not None:
        rs += [i for i in range(inst.n) if in_unit_square_below(inst, inst.points[ell], inst.points[i])]
    out = {}
    for r in rs:
        ctx = PsiContext(labels=rest | ({r} if r is not None else frozenset()), leaders=leaders)
        for p in S:
            suffix = [q for q in S if key(q) > key(p)]
            v = psi(inst, suffix, ctx)
            out[(p, r)] = None if v is NEG_INFINITY else v
    return out
