"""Slab dynamic program for an arbitrary leader direction.

Points are ordered bottom to top by frame-y and left to right by frame-x.  A
subproblem is bounded by two externally labeled points ``ell`` (below) and
``u`` (above); it covers the points strictly between them in height that are
frame-left of both.  The rest of the horizontal band is internal by
construction.  Inside a subproblem, either every point is internal, or there
is a frame-rightmost external point ``p`` that splits it into the part below
``p`` and the part above ``p``, with every point right of ``p`` internal.

The two parts can still interact with each other (labels reaching across
``p``'s height, leaders crossing labels).  Instead of summarising the
neighbourhood by influence-region configurations, each split guesses the
status of exactly those points that can interact across it and hands each
part its guessed statuses.  Every subproblem additionally carries the
statuses of outside points it can interact with.  This keeps the recurrence
exact for every direction; the region-based configuration machinery below is
exposed for analysis and testing.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional

from .conflicts import ConflictTable, bits
from .model import Instance, Labeling, SolveResult
from .regions import Frame, RegionKind, exponents_for, in_influence_region
from .validity import find_violation

BOTTOM, TOP = "bottom", "top"


# --- influence-region configurations (analysis API) -----------------------


@dataclass(frozen=True)
class Configuration:
    internal: tuple[int, ...] = ()
    external_e2: Optional[int] = None

    def __post_init__(self):
        if self.internal and self.external_e2 is not None:
            raise ValueError("a configuration is either internal points or one external point")
        if tuple(sorted(set(self.internal))) != self.internal:
            raise ValueError("internal points must be sorted and distinct")


    def sort_key(self) -> tuple:
        return (self.internal, -1 if self.external_e2 is None else self.external_e2)


EMPTY = Configuration()


@dataclass(frozen=True)
class GeneralDPKey:
    """Memo key of one subproblem.

    ``ell``/``u`` are bit positions (``-1`` and ``n`` are the dummies).
    ``fixed`` holds the statuses guessed for subproblem points by the caller,
    ``c_bottom``/``c_top`` the statuses of interacting points below and above
    the band, all as (internal mask, external mask) pairs.
    """

    ell: int
    u: int
    fixed: tuple[int, int]
    c_bottom: tuple[int, int]
    c_top: tuple[int, int]


def _region_kinds(side: str) -> tuple[RegionKind, RegionKind]:
    if side == BOTTOM:
        return RegionKind.BOTTOM_LABEL, RegionKind.BOTTOM_LEADER_ONLY
    if side == TOP:
        return RegionKind.TOP_LABEL, RegionKind.TOP_LEADER_ONLY
    raise ValueError(f"side must be {BOTTOM!r} or {TOP!r}")


def enumerate_configurations(
    inst: Instance, anchor: int, side: str = BOTTOM, prune: bool = False
) -> list[Configuration]:
    """Every admissible status assignment of an anchor's influence region.

    Internal sets are subsets of the label region with pairwise disjoint
    labels, of size at most e (bottom) or f (top); each leader-only region
    point also yields a single-external configuration.  ``prune`` caps the
    internal sets at two points.
    """
    frame = Frame(inst.direction)
    label_kind, leader_kind = _region_kinds(side)
    exps = exponents_for(frame)
    cap = exps.e if side == BOTTOM else exps.f
    if prune:
        cap = min(cap, 2)
    a = inst.points[anchor]
    region = [
        i for i in range(inst.n)
        if i != anchor and in_influence_region(inst.points[i], a, label_kind, frame, inst.w, inst.h)
    ]
    leader_only = [
        i for i in range(inst.n)
        if i != anchor and in_influence_region(inst.points[i], a, leader_kind, frame, inst.w, inst.h)
    ]
    table = ConflictTable.build(inst)
    out = [EMPTY]

    def grow(start: int, chosen: list[int]):
        for k in range(start, len(region)):
            q = region[k]
            if any(table.ii[q] >> c & 1 for c in chosen):
                continue
            chosen.append(q)
            out.append(Configuration(tuple(sorted(chosen))))
            if len(chosen) < cap:
                grow(k + 1, chosen)
            chosen.pop()

    if cap > 0:
        grow(0, [])
    out.extend(Configuration((), q) for q in leader_only)
    return sorted(set(out), key=Configuration.sort_key)


def _slab_sets(inst: Instance, frame: Frame, ell: Optional[int], u: Optional[int]):
    """(subproblem points, closed-band points) for real or dummy anchors."""
    lo = None if ell is None else frame.fy(inst.points[ell])
    hi = None if u is None else frame.fy(inst.points[u])
    band = [
        i for i in range(inst.n)
        if (lo is None or frame.fy(inst.points[i]) > lo) and (hi is None or frame.fy(inst.points[i]) < hi)
    ]
    lim = [frame.fx(inst.points[a]) for a in (ell, u) if a is not None]
    sub = [i for i in band if all(frame.fx(inst.points[i]) < x for x in lim)]
    return sub, band


def _compatible(
    inst: Instance, p: int, anchor: Optional[int], u_other: Optional[int], given: Configuration, side: str
) -> list[Configuration]:
    frame = Frame(inst.direction)
    label_kind, leader_kind = _region_kinds(side)
    ell, u = (anchor, u_other) if side == BOTTOM else (u_other, anchor)
    _, band = _slab_sets(inst, frame, ell, u)
    pp = inst.points[p]
    right_of_p = [i for i in band if frame.fx(inst.points[i]) > frame.fx(pp)]
    in_region = [
        i for i in set(right_of_p) | set(given.internal)
        if i != p and in_influence_region(inst.points[i], pp, label_kind, frame, inst.w, inst.h)
    ]
    required = set(in_region)
    if anchor is not None and in_influence_region(inst.points[anchor], pp, leader_kind, frame, inst.w, inst.h):
        ext = anchor
    elif given.external_e2 is not None and in_influence_region(
        inst.points[given.external_e2], pp, leader_kind, frame, inst.w, inst.h
    ):
        ext = given.external_e2
    else:
        ext = None
    out = [
        c for c in enumerate_configurations(inst, p, side)
        if c.external_e2 == ext and required <= set(c.internal)
    ]
    return sorted(set(out), key=Configuration.sort_key)


def compatible_bottom(
    inst: Instance, p: int, ell: Optional[int], u: Optional[int], c_bottom: Configuration = EMPTY
) -> list[Configuration]:
    """Configurations of p's bottom region consistent with what is already decided.

    Region points right of p inside the closed band and the internal points of
    ``c_bottom`` must stay internal; if ``ell`` (or the external point of
    ``c_bottom``) sits in p's leader-only region, it is the external part.
    """
    return _compatible(inst, p, ell, u, c_bottom, BOTTOM)


def compatible_top(
    inst: Instance, p: int, ell: Optional[int], u: Optional[int], c_top: Configuration = EMPTY
) -> list[Configuration]:
    """Mirror of :func:`compatible_bottom` for the top region and ``u``."""
    return _compatible(inst, p, u, ell, c_top, TOP)


def rightmost_conflict(
    inst: Instance, ell: Optional[int], u: Optional[int], c: Configuration, side: str = BOTTOM
) -> Optional[int]:
    """Frame-rightmost closed-band point whose label clashes with a configuration.

    A clash is an overlap with an internal label of ``c`` or a hit by the
    leader of an external point: the configuration's external point or, for
    a real anchor, any region point not in ``c.internal``.
    """
    frame = Frame(inst.direction)
    _, band = _slab_sets(inst, frame, ell, u)
    anchor = ell if side == BOTTOM else u
    label_kind, _ = _region_kinds(side)
    leaders = set()
    if c.external_e2 is not None:
        leaders.add(c.external_e2)
    if anchor is not None:
        a = inst.points[anchor]
        region = {
            i for i in range(inst.n)
            if i != anchor and in_influence_region(inst.points[i], a, label_kind, frame, inst.w, inst.h)
        }
        leaders |= region - set(c.internal)
    table = ConflictTable.build(inst)
    best = None
    for q in band:
        if q in c.internal or q in leaders:
            continue
        hit = any(table.ii[q] >> r & 1 for r in c.internal) or any(table.ei[e] >> q & 1 for e in leaders)
        if hit and (best is None or frame.key(inst.points[q]) > frame.key(inst.points[best])):
            best = q
    return best


def iota_estimate(n: int, delta: int, frame: Frame) -> int:
    """Subproblem-interaction cost polynomial for the given orientation."""
    if n < 1 or delta < 1:
        raise ValueError("n and delta must be positive")
    x = exponents_for(frame)
    e1, f1, es, fs = x.e_prime, x.f_prime, x.e_star, x.f_star
    terms = [
        n ** (2 * e1 + 2 * f1),
        n ** (2 * e1 + f1) * delta ** fs,
        n ** (e1 + 2 * f1) * delta ** es,
        n ** (e1 + f1) * delta ** (es + fs),
        n ** (2 * e1) * delta ** (2 * fs),
        n ** (2 * f1) * delta ** (2 * es),
        n ** e1 * delta ** (es + 2 * fs),
        n ** f1 * delta ** (2 * es + fs),
        delta ** (2 * es + 2 * fs),
    ]
    return sum(terms)


# --- exact dynamic program -------------------------------------------------


@dataclass
class _Cell:
    value: int  # -1 stands for infeasible
    choice: Optional[tuple] = None  # (p, guess_int, guess_ext) or None for all-internal


@dataclass
class _Solver:
    t: ConflictTable
    below: list[int]
    left: list[int]
    rdesc: list[int]
    prune: bool
    memo: dict = field(default_factory=dict)
    guesses: int = 0

    def subproblem(self, ell: int, u: int) -> tuple[int, int]:
        n = self.t.n
        band = ((1 << u) - 1) & ~((1 << (ell + 1)) - 1)
        lim = (1 << n) - 1
        if ell >= 0:
            lim &= self.left[ell]
        if u < n:
            lim &= self.left[u]
        sub = band & lim
        return sub, band & ~sub

    def anchors(self, ell: int, u: int) -> int:
        m = 0
        if ell >= 0:
            m |= 1 << ell
        if u < self.t.n:
            m |= 1 << u
        return m

    def solve(self, key: GeneralDPKey) -> _Cell:
        cell = self.memo.get(key)
        if cell is None:
            cell = self._compute(key)
            self.memo[key] = cell
        return cell

    def _internal_ok(self, q: int, inside: int, ci: int, ce: int, pe: int) -> bool:
        t = self.t
        return bool(t.can_int >> q & 1) and not pe >> q & 1 and not (
            t.ii[q] & (inside | ci) or t.ie[q] & ce
        )

    def _external_ok(self, q: int, inside: int, ci: int, ce: int, pi: int) -> bool:
        t = self.t
        return bool(t.can_ext >> q & 1) and not pi >> q & 1 and not (
            t.ei[q] & (inside | ci) or t.ee[q] & ce
        )

    def _ctx(self, part: int, ci: int, ce: int) -> tuple[int, int]:
        t = self.t
        ki = 0
        for q in bits(ci):
            if t.reach(q, 0) & part:
                ki |= 1 << q
        ke = 0
        for q in bits(ce):
            if t.reach(q, 1) & part:
                ke |= 1 << q
        return ki, ke

    def _compute(self, key: GeneralDPKey) -> _Cell:
        t = self.t
        ell, u = key.ell, key.u
        pi, pe = key.fixed
        ci = key.c_bottom[0] | key.c_top[0]
        ce = key.c_bottom[1] | key.c_top[1] | self.anchors(ell, u)
        S, C = self.subproblem(ell, u)
        if not S:
            return _Cell(0)

        best = _Cell(-1)
        # everything internal
        if all(self._internal_ok(q, (S | C) & ~(1 << q), ci, ce, pe) for q in bits(S)):
            best = _Cell(bin(S).count("1"))

        R = 0
        rcount = 0
        for p in self.rdesc:
            if not S >> p & 1:
                continue
            fixed_int = C | R
            if self._external_ok(p, fixed_int, ci, ce, pi):
                cand = self._split(key, S, C, R, p, ci, ce)
                if cand is not None and cand[0] >= 0 and rcount + cand[0] > best.value:
                    best = _Cell(rcount + cand[0], (p, cand[1], cand[2]))
            if not self._internal_ok(p, C | R, ci, ce, pe):
                break
            R |= 1 << p
            rcount += 1
        return best

    def _split(self, key: GeneralDPKey, S: int, C: int, R: int, p: int, ci: int, ce: int):
        """Best value of the two parts around external p, with its guess."""
        t = self.t
        n = t.n
        ell, u = key.ell, key.u
        pi, pe = key.fixed
        A = S & self.below[p] & self.left[p]
        B = S & ~self.below[p] & ~(1 << p) & self.left[p]
        pbit = 1 << p
        fixed_int = C | R | ci
        fixed_ext = ce | pbit
        dom_int = t.can_int & ~pe
        dom_ext = t.can_ext & ~pi
        if self.prune:
            for x in bits(A | B):
                if t.ii[x] & fixed_int or t.ie[x] & fixed_ext:
                    dom_int &= ~(1 << x)
                if t.ei[x] & fixed_int or t.ee[x] & fixed_ext:
                    dom_ext &= ~(1 << x)
                if not (dom_int | dom_ext) >> x & 1:
                    return None

        def crossing(side: int, other: int) -> list[int]:
            oi, oe = other & dom_int, other & dom_ext
            out = []
            for x in bits(side):
                hit = False
                if dom_int >> x & 1 and (t.ii[x] & oi or t.ie[x] & oe):
                    hit = True
                if dom_ext >> x & 1 and (t.ei[x] & oi or t.ee[x] & oe):
                    hit = True
                if hit:
                    out.append(x)
            return out

        X = crossing(A, B) + crossing(B, A)

        # contexts of the two parts do not depend on the guess
        up_fixed = ((C | R) & ~self.below[p]) & ~pbit
        lo_fixed = (C | R) & self.below[p]
        ctx_a_bottom = self._ctx(A, key.c_bottom[0], key.c_bottom[1])
        top_i = key.c_top[0] | up_fixed
        top_e = key.c_top[1] | (self.anchors(-1, u))
        ctx_a_top = self._ctx(A, top_i, top_e)
        bot_i = key.c_bottom[0] | lo_fixed
        bot_e = key.c_bottom[1] | self.anchors(ell, n)
        ctx_b_bottom = self._ctx(B, bot_i, bot_e)
        ctx_b_top = self._ctx(B, key.c_top[0], key.c_top[1])

        part_cache: dict = {}

        def part(lo: int, hi: int, fixed: tuple[int, int], cb, ct) -> int:
            k = GeneralDPKey(lo, hi, fixed, cb, ct)
            v = part_cache.get(k)
            if v is None:
                v = self.solve(k).value
                part_cache[k] = v
            return v

        best = None
        assign_i = 0
        assign_e = 0

        def rec(k: int):
            nonlocal best, assign_i, assign_e
            if k == len(X):
                self.guesses += 1
                gi = assign_i | pi
                ge = assign_e | pe
                va = part(ell, p, (gi & A, ge & A), ctx_a_bottom, ctx_a_top)
                if va < 0:
                    return
                vb = part(p, u, (gi & B, ge & B), ctx_b_bottom, ctx_b_top)
                if vb < 0:
                    return
                if best is None or va + vb > best[0]:
                    best = (va + vb, assign_i, assign_e)
                return
            x = X[k]
            xb = 1 << x
            if dom_int >> x & 1 and not (t.ii[x] & assign_i or t.ie[x] & assign_e):
                assign_i |= xb
                rec(k + 1)
                assign_i &= ~xb
            if dom_ext >> x & 1 and not (t.ei[x] & assign_i or t.ee[x] & assign_e):
                assign_e |= xb
                rec(k + 1)
                assign_e &= ~xb

        rec(0)
        return best

    # witness reconstruction mirrors _split's bookkeeping
    def collect(self, key: GeneralDPKey, internal: set[int]) -> None:
        cell = self.solve(key)
        if cell.value < 0:
            raise AssertionError("reconstructing an infeasible subproblem")
        S, C = self.subproblem(key.ell, key.u)
        if cell.choice is None:
            internal.update(bits(S))
            return
        p, gi, ge = cell.choice
        t = self.t
        n = t.n
        pi, pe = key.fixed
        R = 0
        for q in self.rdesc:
            if q == p:
                break
            if S >> q & 1:
                R |= 1 << q
        internal.update(bits(R))
        A = S & self.below[p] & self.left[p]
        B = S & ~self.below[p] & ~(1 << p) & self.left[p]
        pbit = 1 << p
        up_fixed = ((C | R) & ~self.below[p]) & ~pbit
        lo_fixed = (C | R) & self.below[p]
        ka = GeneralDPKey(
            key.ell, p, ((gi | pi) & A, (ge | pe) & A),
            self._ctx(A, key.c_bottom[0], key.c_bottom[1]),
            self._ctx(A, key.c_top[0] | up_fixed, key.c_top[1] | self.anchors(-1, key.u)),
        )
        kb = GeneralDPKey(
            p, key.u, ((gi | pi) & B, (ge | pe) & B),
            self._ctx(B, key.c_bottom[0] | lo_fixed, key.c_bottom[1] | self.anchors(key.ell, n)),
            self._ctx(B, key.c_top[0], key.c_top[1]),
        )
        self.collect(ka, internal)
        self.collect(kb, internal)


def solve_general(
    inst: Instance,
    prune: bool = True,
    must_internal=frozenset(),
    must_external=frozenset(),
) -> SolveResult:
    """Maximum number of internal labels for the instance's leader direction.

    ``prune`` narrows each guessed point to the statuses that survive its
    already-fixed neighbours before enumerating; the optimum is the same
    either way.  Obstacles and ``must_*`` sets act as unary restrictions.
    Raises :class:`~mixlabel.model.Infeasible` if no valid labeling exists.
    """
    from .model import Infeasible

    frame = Frame(inst.direction)
    n = inst.n
    order = sorted(range(n), key=lambda i: (frame.fy(inst.points[i]), frame.fx(inst.points[i]), i))
    pos = {i: k for k, i in enumerate(order)}
    table = ConflictTable.build(inst, order, must_internal, must_external)
    below = [(1 << k) - 1 for k in range(n)]
    rkey = sorted(range(n), key=lambda k: (frame.fx(inst.points[order[k]]), frame.fy(inst.points[order[k]]), order[k]))
    left = [0] * n
    acc = 0
    for k in rkey:
        left[k] = acc
        acc |= 1 << k
    solver = _Solver(table, below, left, rkey[::-1], prune)
    root = GeneralDPKey(-1, n, (0, 0), (0, 0), (0, 0))
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10000))
    try:
        cell = solver.solve(root)
        if cell.value < 0:
            raise Infeasible("no valid labeling exists")
        internal: set[int] = set()
        solver.collect(root, internal)
    finally:
        sys.setrecursionlimit(limit)
    labeling = Labeling.from_internal(n, (order[k] for k in internal))
    if labeling.count != cell.value:
        raise AssertionError("witness size disagrees with the optimum")
    violation = find_violation(inst, labeling)
    if violation is not None:
        raise AssertionError(f"solver produced an invalid labeling: {violation.describe()}")
    return SolveResult(
        cell.value,
        labeling,
        "general",
        {"cells": len(solver.memo), "guesses": solver.guesses, "prune": prune},
    )
