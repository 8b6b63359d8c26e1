"""Exhaustive certification: try every internal/external partition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import Infeasible, Instance, Labeling
from .validity import EXT, INT, label_blocked, leader_blocked, pair_conflict, find_violation
from .geometry import point_in_polygon

DEFAULT_CAP = 16


class OracleRefused(ValueError):
    pass


@dataclass
class OracleResult:
    optimum: int
    witness: Labeling
    enumerated: int


def _masks(inst: Instance):
    n = inst.n
    ii = [0] * n
    ei = [0] * n
    ee = [0] * n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if pair_conflict(inst, i, INT, j, INT):
                ii[i] |= 1 << j
            if pair_conflict(inst, i, EXT, j, INT):
                ei[i] |= 1 << j
            if pair_conflict(inst, i, EXT, j, EXT):
                ee[i] |= 1 << j
    return ii, ei, ee


def brute_force(
    inst: Instance,
    cap: int = DEFAULT_CAP,
    must_internal: frozenset[int] = frozenset(),
    must_external: frozenset[int] = frozenset(),
) -> OracleResult:
    """Maximum number of internal labels over all 2**n partitions.

    Ties between optimal partitions go to the lexicographically smallest
    sorted internal index tuple.  Obstacles are honoured.  ``must_*`` restrict
    the enumeration to partitions respecting the given statuses.
    """
    n = inst.n
    if n > cap:
        raise OracleRefused(f"brute force refused for n={n} > cap={cap}")
    for p in inst.points:
        if any(point_in_polygon(p, poly) for poly in inst.obstacles):
            raise Infeasible("a point lies inside an obstacle")
    ii, ei, ee = _masks(inst)
    full = (1 << n) - 1
    no_int = 0
    no_ext = 0
    for i in range(n):
        if inst.obstacles and label_blocked(inst, i):
            no_int |= 1 << i
        if inst.obstacles and leader_blocked(inst, i):
            no_ext |= 1 << i
    for i in must_external:
        no_int |= 1 << i
    for i in must_internal:
        no_ext |= 1 << i

    best: Optional[tuple[int, tuple[int, ...]]] = None
    enumerated = 0
    for I in range(full + 1):
        enumerated += 1
        if I & no_int or (full ^ I) & no_ext:
            continue
        E = full ^ I
        ok = True
        m = I
        while m:
            b = m & -m
            i = b.bit_length() - 1
            if ii[i] & I:
                ok = False
                break
            m ^= b
        if not ok:
            continue
        m = E
        while m:
            b = m & -m
            i = b.bit_length() - 1
            if ei[i] & I or ee[i] & E:
                ok = False
                break
            m ^= b
        if not ok:
            continue
        members = tuple(i for i in range(n) if I >> i & 1)
        key = (len(members), members)
        if best is None or key[0] > best[0] or (key[0] == best[0] and key[1] < best[1]):
            best = key
    if best is None:
        raise Infeasible("no valid partition exists")
    witness = Labeling.from_internal(n, best[1])
    assert find_violation(inst, witness) is None
    return OracleResult(best[0], witness, enumerated)
