from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixlabel.geometry import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    Direction,
    LeaderRay,
    Point,
    Rect,
    direction_from_theta,
    point_in_polygon,
    polygon_area2,
    ray_hits_rect,
    ray_through_point,
    rays_conflict,
    rects_overlap,
)


def unit(x, y, w=1, h=1) -> Rect:
    return Rect(Point.of(x, y), Fraction(w), Fraction(h))


def test_theta_axis_cases_are_exact():
    assert direction_from_theta(0.0) == LEFT == Direction(-1, 0)
    assert direction_from_theta(math.pi) == RIGHT == Direction(1, 0)
    assert direction_from_theta(3 * math.pi / 2) == DOWN == Direction(0, -1)
    assert direction_from_theta(math.pi / 2) == UP


@pytest.mark.parametrize("theta", [-0.1, 2 * math.pi, 7.0, float("nan")])
def test_theta_out_of_range(theta):
    with pytest.raises(ValueError):
        direction_from_theta(theta)


@given(st.floats(min_value=0, max_value=2 * math.pi, exclude_max=True))
def test_theta_round_trip(theta):
    got = direction_from_theta(theta).angle()
    diff = abs(got - theta)
    assert min(diff, 2 * math.pi - diff) < 1e-9


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 7))
def test_direction_is_canonical(dx, dy, k):
    if dx == 0 and dy == 0:
        return
    assert Direction.of(k * dx, k * dy) == Direction.of(dx, dy)
    assert Direction.of(Fraction(dx, k), Fraction(dy, k)) == Direction.of(dx, dy)


def test_zero_direction_rejected():
    with pytest.raises(ValueError):
        Direction.of(0, 0)


def test_label_overlap_examples():
    assert not rects_overlap(unit(0, 0), unit(2, 0))
    assert rects_overlap(unit(0, 0), unit(0.5, 0.5))
    assert not rects_overlap(unit(0, 0), unit(1, 0))  # shared edge only


def test_ray_hits_rect_examples():
    sq = unit(0, 0)
    assert ray_hits_rect(LeaderRay(Point.of(2, 0.5), LEFT), sq)
    assert not ray_hits_rect(LeaderRay(Point.of(2, 0), LEFT), sq)  # grazes the bottom edge
    assert not ray_hits_rect(LeaderRay(Point.of(2, 2), LEFT), sq)


def test_rays_conflict_examples():
    assert rays_conflict(LeaderRay(Point.of(0, 0), LEFT), LeaderRay(Point.of(3, 0), LEFT))
    assert not rays_conflict(LeaderRay(Point.of(0, 0), LEFT), LeaderRay(Point.of(0, 1), LEFT))
    diag = Direction(-1, -1)
    assert rays_conflict(LeaderRay(Point.of(0, 0), diag), LeaderRay(Point.of(1, 1), diag))
    with pytest.raises(ValueError):
        rays_conflict(LeaderRay(Point.of(0, 0), LEFT), LeaderRay(Point.of(1, 1), UP))


coord = st.integers(-5, 5)


@given(coord, coord, coord, coord)
def test_overlap_is_symmetric_and_matches_intervals(ax, ay, bx, by):
    a, b = unit(ax, ay), unit(bx, by)
    assert rects_overlap(a, b) == rects_overlap(b, a)
    assert rects_overlap(a, b) == (abs(ax - bx) < 1 and abs(ay - by) < 1)


@settings(max_examples=300)
@given(coord, coord, st.integers(-3, 3), st.integers(-3, 3), coord, coord, st.integers(1, 3), st.integers(1, 3))
def test_ray_hits_rect_matches_sampling(ox, oy, dx, dy, rx, ry, w, h):
    if dx == 0 and dy == 0:
        return
    d = Direction.of(dx, dy)
    rect = unit(rx, ry, w, h)
    # entry/exit parameters are multiples of 1/6, so odd multiples of 1/12
    # land strictly inside every nonempty crossing
    sampled = any(
        rect.contains_open(Point(ox + Fraction(2 * k + 1, 12) * d.dx, oy + Fraction(2 * k + 1, 12) * d.dy))
        for k in range(12 * 20)
    )
    assert ray_hits_rect(LeaderRay(Point.of(ox, oy), d), rect) == sampled


def test_ray_through_point_excludes_origin_and_backwards():
    ray = LeaderRay(Point.of(0, 0), LEFT)
    assert ray_through_point(ray, Point.of(-1, 0))
    assert not ray_through_point(ray, Point.of(1, 0))
    assert not ray_through_point(ray, Point.of(0, 0))


def test_polygon_helpers():
    tri = (Point.of(0, 0), Point.of(2, 0), Point.of(0, 2))
    assert polygon_area2(tri) == 4
    assert point_in_polygon(Point.of(0.5, 0.5), tri)
    assert not point_in_polygon(Point.of(1, 0), tri)  # boundary is outside
    assert not point_in_polygon(Point.of(2, 2), tri)
