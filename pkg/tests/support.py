"""Shared fixtures for the test suite: the seeded corpus and an independent LP region oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from hypothesis import strategies as st
from scipy.optimize import linprog

from mixlabel.files import generate_instance
from mixlabel.geometry import Point, direction_from_theta
from mixlabel.model import Instance
from mixlabel.regions import RegionKind

# one representative slope per orientation class; 0 and pi map exactly
THETAS = (
    0.0,
    math.pi / 8,
    3 * math.pi / 8,
    math.pi / 2,
    5 * math.pi / 8,
    math.pi,
    1.3 * math.pi,
    3 * math.pi / 2,
    1.6 * math.pi,
    1.85 * math.pi,
)


@dataclass(frozen=True)
class CorpusEntry:
    seed: int
    dmin: Fraction
    inst: Instance


def corpus(count: int = 200, max_n: int = 9) -> list[CorpusEntry]:
    """Seeded instances cycling n through 1..max_n and dmin through {0.15, 0.4}."""
    out = []
    for k in range(count):
        n = 1 + k % max_n
        dmin = Fraction(3, 20) if (k // max_n) % 2 == 0 else Fraction(2, 5)
        out.append(CorpusEntry(k, dmin, generate_instance(n, seed=1000 + k, dmin=dmin)))
    return out


# --- float LP bounding boxes of influence regions ---------------------------
#
# Variables v = (a, b, qx, qy): (a, b) is the witness label anchor and q the
# query point, both relative to the anchor point at the origin.  A row
# (coeffs, rhs) means coeffs . v <= rhs; strictness is handled by demanding a
# strictly positive Chebyshev slack before measuring the box.

BOX = 6.0


def _unit(d: tuple[float, float]) -> tuple[float, float]:
    n = math.hypot(*d)
    return d[0] / n, d[1] / n


def _region_rows(d: tuple[float, float], kind: RegionKind) -> list[tuple[list, list]]:
    dx, dy = _unit(d)
    bottom = kind.is_bottom
    label = kind in (RegionKind.BOTTOM_LABEL, RegionKind.TOP_LABEL)

    def fy(off):
        r = [0.0] * 4
        r[off], r[off + 1] = dy, -dx
        return r

    def fx(off):
        r = [0.0] * 4
        r[off], r[off + 1] = -dx, -dy
        return r

    def neg(r):
        return [-v for v in r]

    A, B = [fx(0)], [0.0]
    if bottom:
        A += [neg(fy(0)), fy(2)]
    else:
        A += [fy(0), neg(fy(2))]
    B += [0.0, 0.0]
    offs = [0.0, dy, -dx, dy - dx]  # fy offsets of the four label corners

    def misses(off):
        """Alternatives under which the ray from the origin misses the label at var(off)."""
        alts = [(fy(off), -max(offs)), (neg(fy(off)), min(offs))]
        e = [0.0] * 4
        if dx <= 1e-15:
            r = e[:]
            r[off] = -1.0
            alts.append((r, 0.0))
        if dx >= -1e-15:
            r = e[:]
            r[off] = 1.0
            alts.append((r, -1.0))
        if dy <= 1e-15:
            r = e[:]
            r[off + 1] = -1.0
            alts.append((r, 0.0))
        if dy >= -1e-15:
            r = e[:]
            r[off + 1] = 1.0
            alts.append((r, -1.0))
        return alts

    systems = []
    for xr, xb in misses(0):
        if label:
            for qr, qb in misses(2):
                rows = A + [xr, qr, [1, 0, -1, 0], [-1, 0, 1, 0], [0, 1, 0, -1], [0, -1, 0, 1]]
                rhs = B + [xb, qb, 1.0, 1.0, 1.0, 1.0]
                systems.append((rows, rhs))
        else:
            rows = A + [xr, [dy, -dx, -dy, dx], [-dy, dx, dy, -dx]]
            rhs = B + [xb, -min(offs), max(offs)]
            # the leader from q travels towards the witness label
            for k, comp in ((0, dx), (1, dy)):
                r_fwd = [0.0] * 4
                r_fwd[k], r_fwd[2 + k] = 1.0, -1.0
                if comp < -1e-15:
                    rows, rhs = rows + [r_fwd], rhs + [0.0]
                elif comp > 1e-15:
                    rows, rhs = rows + [[-v for v in r_fwd]], rhs + [1.0]
                else:
                    rows, rhs = rows + [r_fwd, [-v for v in r_fwd]], rhs + [0.0, 1.0]
            systems.append((rows, rhs))
    return systems


@lru_cache(maxsize=None)
def region_bbox(d: tuple[float, float], kind: RegionKind):
    """(lo, hi) corners of the region's bounding box relative to the anchor, or None if empty."""
    lo = [math.inf, math.inf]
    hi = [-math.inf, -math.inf]
    for rows, rhs in _region_rows(d, kind):
        A = np.array(rows, float)
        b = np.array(rhs, float)
        norms = np.linalg.norm(A, axis=1)
        c = np.zeros(5)
        c[4] = -1.0
        res = linprog(c, A_ub=np.hstack([A, norms[:, None]]), b_ub=b, bounds=[(-BOX, BOX)] * 4 + [(None, 1)], method="highs")
        if res.status != 0 or res.x[4] < 1e-9:
            continue
        for k in range(2):
            for s in (1.0, -1.0):
                cc = np.zeros(4)
                cc[2 + k] = -s
                r = linprog(cc, A_ub=A, b_ub=b, bounds=[(-BOX, BOX)] * 4, method="highs")
                if r.status == 0:
                    lo[k] = min(lo[k], r.x[2 + k])
                    hi[k] = max(hi[k], r.x[2 + k])
    if lo[0] == math.inf:
        return None
    return tuple(lo), tuple(hi)


def float_direction(theta: float, flipped: bool = False) -> tuple[float, float]:
    """Travel direction for theta; ``flipped`` negates the vertical component."""
    d = direction_from_theta(theta)
    return (float(d.dx), -float(d.dy) if flipped else float(d.dy))


def box_conforms(box, bound: int, tol: float = 1e-6) -> bool:
    """Whether a region bounding box has size at most 1 x bound or bound x 1 (empty when bound is 0)."""
    if bound == 0:
        return box is None
    if box is None:
        return True
    w = box[1][0] - box[0][0]
    h = box[1][1] - box[0][1]
    return (w <= 1 + tol and h <= bound + tol) or (w <= bound + tol and h <= 1 + tol)


# criterion number -> pass/fail line, filled by test_acceptance and printed by conftest
ACCEPTANCE: dict[int, str] = {}


def small_instances(max_n: int = 6, grid: int = 4, side: int = 3):
    """Hypothesis strategy: up to max_n points on a 1/grid lattice with distinct x and y."""
    coord = st.integers(0, side * grid).map(lambda k: Fraction(k, grid))

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        xs = draw(st.lists(coord, min_size=n, max_size=n, unique=True))
        ys = draw(st.lists(coord, min_size=n, max_size=n, unique=True))
        order = draw(st.permutations(range(n)))
        return Instance(tuple(Point(xs[i], ys[order[i]]) for i in range(n)), direction_from_theta(0.0))

    return build()


def theta_strategy():
    return st.sampled_from(THETAS) | st.floats(0, 2 * math.pi, exclude_max=True)
