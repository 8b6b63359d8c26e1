from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from mixlabel.geometry import Point, direction_from_theta
from mixlabel.model import Infeasible, Instance
from mixlabel.oracle import brute_force
from mixlabel.solver_general import solve_general
from mixlabel.solver_left import (
    DummyPoints,
    in_unit_square_below,
    psi_prime_table,
    rho,
    solve_left,
    topmost_in_unit_square,
)
from mixlabel.validity import is_valid
from support import small_instances

F = Fraction


def test_topmost_examples():
    p = Point.of(0, 1)
    inst = Instance.build([(0.5, 0.5), (0.5, 0.2)])
    assert topmost_in_unit_square(inst, p) == 0
    assert topmost_in_unit_square(Instance.build([(2, 2)]), p) is None
    inst = Instance.build([(0.5, 0.5), (0.9, 0.9)])
    assert topmost_in_unit_square(inst, p) == 1


def test_square_is_closed_on_the_left_only():
    p = Point.of(0, 1)
    assert in_unit_square_below(Instance.build([(0, 0)]), p, Point.of(0, 0.5))
    assert not in_unit_square_below(Instance.build([(0, 0)]), p, Point.of(1, 0.5))
    assert not in_unit_square_below(Instance.build([(0, 0)]), p, Point.of(0.5, 0))
    assert not in_unit_square_below(Instance.build([(0, 0)]), p, Point.of(0.5, 1))


def test_rho_empty_square():
    inst = Instance.build([(0, 2), (5, 0)])
    assert rho(inst, 0, 1, None) is None


def test_rho_prefers_square_points_above_ell():
    # p=(0,2), ell=(1,0), q=(0.5,1.5) lies in p's square above ell
    inst = Instance.build([(0, 2), (1, 0), (0.5, 1.5)])
    assert rho(inst, 0, 1, None) == 2


def test_rho_falls_back_to_r():
    # q lies in p's square but below ell, so r (also in p's square) is returned
    inst = Instance.build([(0, 2), (0.6, 1.5), (0.5, 1.2), (0.8, 1.1)])
    assert rho(inst, 0, 1, 3) == 3
    assert rho(inst, 0, 1, None) is None


def test_psi_prime_without_conflicts_counts_the_suffix():
    inst = Instance.build([(0, 0), (3, 2), (6, 4)])
    table = psi_prime_table(inst, None, None)
    assert table == {(0, None): 2, (1, None): 1, (2, None): 0}


def test_psi_prime_with_r_overlapping_the_rightmost_point():
    # ell=(0,2); r=(0.5,1.5) in ell's square has a label reaching up into the
    # band, where it overlaps the label of p0=(-0.3,2.3); p1=(-3,2.5) is left of p0
    inst = Instance.build([(0, 2), (0.5, 1.5), (-0.3, 2.3), (-3, 2.5)])
    table = psi_prime_table(inst, 0, None)
    assert table[(2, None)] == 0 and table[(3, None)] == 1
    assert table[(2, 1)] == 0
    assert table[(3, 1)] is None


def test_dummies_dominate():
    inst = Instance.build([(0, 0), (2, 3), (-1, 5)])
    d = DummyPoints.for_instance(inst)
    margin = inst.n + 2
    for p in inst.points:
        assert d.p_plus_inf.x - (p.x + 1) > margin and d.p_plus_inf.y - (p.y + 1) > margin
        assert d.p_minus_inf.x - (p.x + 1) > margin and p.y - d.p_minus_inf.y > margin


def test_solve_examples():
    assert solve_left(Instance.build([(0, 0)])).optimum == 1
    assert solve_left(Instance.build([(0, 0), (0.5, 0.5)])).optimum == 1
    res = solve_left(Instance.build([(0, 0), (3, 0.5), (6, 1)]))
    assert res.optimum == 3 and res.labeling.internal == {0, 1, 2}


def test_rejects_other_directions_and_equal_heights():
    with pytest.raises(ValueError):
        solve_left(Instance.build([(0, 0)], direction=direction_from_theta(1.0)))
    with pytest.raises(ValueError):
        solve_left(Instance.build([(0, 0), (3, 0)]))


def test_must_sets_can_make_it_infeasible():
    inst = Instance.build([(0, 0), (2, F(1, 2))])
    with pytest.raises(Infeasible):
        solve_left(inst, must_internal=frozenset({0}), must_external=frozenset({1}))


@settings(max_examples=150, deadline=None)
@given(small_instances(8))
def test_matches_oracle_and_general(inst):
    res = solve_left(inst)
    assert res.optimum == brute_force(inst).optimum == solve_general(inst).optimum
    assert is_valid(inst, res.labeling)[0]


@settings(max_examples=80, deadline=None)
@given(small_instances(7, grid=8, side=2))
def test_matches_oracle_on_dense_instances(inst):
    assert solve_left(inst).optimum == brute_force(inst).optimum
