from __future__ import annotations

import csv
import json
import math
import os
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixlabel.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, SWEEP_COLUMNS, main
from mixlabel.files import (
    FormatError,
    format_scalar,
    generate_points,
    instance_from_dict,
    instance_to_dict,
    parse_scalar,
)
from mixlabel.preprocess import density, min_distance_squared
from mixlabel.sweep import interval_bound
from support import small_instances

DATA = os.path.join(os.path.dirname(__file__), "data")
GAP = os.path.join(DATA, "figure1_gap.json")


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def far_points(tmp_path):
    return write(tmp_path / "far.json", {"points": [["0", "0"], ["3", "0.5"], ["6", "1"]]})


# --- scalars and files ------------------------------------------------------


@pytest.mark.parametrize("text, value", [("0.1", Fraction(1, 10)), ("1/3", Fraction(1, 3)), (2, Fraction(2)), (0.5, Fraction(1, 2))])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", [0.1, "abc", True, None, float("inf")])
def test_parse_scalar_rejects(bad):
    with pytest.raises(FormatError):
        parse_scalar(bad)


@given(st.fractions())
def test_scalar_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(small_instances(6))
def test_instance_round_trip(inst):
    assert instance_from_dict(json.loads(json.dumps(instance_to_dict(inst)))) == inst


def test_instance_file_errors():
    with pytest.raises(FormatError):
        instance_from_dict({"points": []})
    with pytest.raises(FormatError):
        instance_from_dict({"points": [["0", "0"]], "theta": 0, "direction": [-1, 0]})
    with pytest.raises(FormatError):
        instance_from_dict({"points": [["0", "0"]], "map": [["0", "0"], ["0", "1"], ["1", "0"]]})  # clockwise


def test_generator_is_deterministic_and_spaced():
    a = generate_points(5, seed=42)
    assert a == generate_points(5, seed=42)
    assert a != generate_points(5, seed=43)
    for n, dmin in ((9, Fraction(2, 5)), (12, Fraction(3, 20))):
        pts = generate_points(n, seed=1, dmin=dmin)
        assert min_distance_squared(pts) >= dmin * dmin
        assert density(pts) <= min(n, math.ceil(1 / dmin))
        assert len({p.x for p in pts}) == n and len({p.y for p in pts}) == n


def test_generator_gives_up_on_impossible_packings():
    with pytest.raises(ValueError):
        generate_points(50, seed=0, dmin=1, box=2, max_attempts=2000)


# --- commands -----------------------------------------------------------------


def test_gen_is_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "--n", "5", "--seed", "42", "--output", str(a)]) == EXIT_OK
    assert main(["gen", "--n", "5", "--seed", "42", "--output", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_solve_far_points(tmp_path):
    out, svg = tmp_path / "out.json", tmp_path / "out.svg"
    code = main(["solve", "--input", far_points(tmp_path), "--theta", "0", "--output", str(out), "--svg", str(svg), "--oracle-check"])
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["optimum"] == 3 and data["internal"] == [0, 1, 2] and data["valid"] is True
    assert data["solver"] == "left"
    assert 'class="leader"' not in svg.read_text()


def test_solve_then_check(tmp_path):
    out = tmp_path / "out.json"
    assert main(["solve", "--input", GAP, "--direction=-1,1", "--output", str(out)]) == EXIT_OK
    assert main(["check", "--input", GAP, "--labeling", str(out)]) == EXIT_OK


def test_solve_at_pi_is_below_the_sweep_optimum(tmp_path, capsys):
    out, best = tmp_path / "pi.json", tmp_path / "best.json"
    assert main(["solve", "--input", GAP, "--theta", str(math.pi), "--output", str(out)]) == EXIT_OK
    assert main(["sweep", "--input", GAP, "--output", str(best)]) == EXIT_OK
    assert json.loads(out.read_text())["optimum"] < json.loads(best.read_text())["optimum"]


def test_corrupted_labeling_fails_check(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert main(["solve", "--input", GAP, "--theta", "0", "--output", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    # swap one external point into the internal set
    moved = data["external"].pop(0)["index"]
    data["internal"] = sorted(data["internal"] + [moved])
    bad = write(tmp_path / "bad.json", data)
    capsys.readouterr()
    assert main(["check", "--input", GAP, "--labeling", bad]) == EXIT_MISMATCH
    report = capsys.readouterr().out
    assert f"{moved}" in report and ("label-label" in report or "leader-label" in report)


def test_all_external_passes_check(tmp_path):
    inst = write(tmp_path / "i.json", {"points": [["0", "0"], ["3", "0.5"]]})
    lab = write(tmp_path / "l.json", {"internal": [], "external": [0, 1], "direction": [-1, 0]})
    assert main(["check", "--input", inst, "--labeling", lab]) == EXIT_OK


def test_overlapping_routed_labels_fail_check(tmp_path):
    inst = write(tmp_path / "i.json", {"points": [["0", "0"], ["3", "0.5"]]})
    rec = lambda i: {"index": i, "boundary_exit": ["-5", "0"], "outer_path": [["-5", "0"], ["-5", "0"]], "label_rect": ["-6", "0", "-5", "1"]}
    lab = write(tmp_path / "l.json", {"internal": [], "external": [rec(0), rec(1)], "direction": [-1, 0]})
    assert main(["check", "--input", inst, "--labeling", lab]) == EXIT_MISMATCH


def test_point_inside_obstacle_exits_infeasible(tmp_path):
    inst = write(tmp_path / "i.json", {"points": [["0", "0"]], "obstacles": [[["-1", "-1"], ["1", "-1"], ["0", "1"]]]})
    assert main(["solve", "--input", inst]) == EXIT_INFEASIBLE


def test_bad_input_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", "--input", str(bad)]) == EXIT_INPUT
    floaty = write(tmp_path / "f.json", {"points": [[0.1, 0]]})
    assert main(["solve", "--input", floaty]) == EXIT_INPUT
    assert main(["solve", "--input", far_points(tmp_path), "--theta", "7"]) == EXIT_INPUT
    big = write(tmp_path / "big.json", {"points": [[str(3 * i), str(i)] for i in range(17)]})
    assert main(["oracle", "--input", big]) == EXIT_INPUT


def test_oracle_command(tmp_path):
    out = tmp_path / "o.json"
    inst = write(tmp_path / "i.json", {"points": [["0", "0"], ["0.1", "0.1"]]})
    assert main(["oracle", "--input", inst, "--output", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["optimum"] == 1


def test_sweep_report(tmp_path, capsys):
    report = tmp_path / "r.csv"
    inst = write(tmp_path / "one.json", {"points": [["0", "0"]]})
    assert main(["sweep", "--input", inst, "--report", str(report)]) == EXIT_OK
    rows = list(csv.DictReader(report.open()))
    assert list(rows[0].keys()) == SWEEP_COLUMNS
    assert all(r["optimum"] == "1" for r in rows)
    assert sum(r["degenerate"] == "0" for r in rows) <= interval_bound(1)
    assert "1 internal" in capsys.readouterr().out


def test_sweep_argmax_matches_report(tmp_path, capsys):
    report = tmp_path / "r.csv"
    assert main(["sweep", "--input", GAP, "--report", str(report)]) == EXIT_OK
    rows = list(csv.DictReader(report.open()))
    best = max(int(r["optimum"]) for r in rows)
    assert f": {best} internal" in capsys.readouterr().out


def test_render_is_deterministic(tmp_path):
    out = tmp_path / "out.json"
    assert main(["solve", "--input", GAP, "--theta", "0", "--output", str(out)]) == EXIT_OK
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["render", "--input", GAP, "--labeling", str(out), "--svg", str(a)]) == EXIT_OK
    assert main(["render", "--input", GAP, "--labeling", str(out), "--svg", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("<?xml")
