"""Command line interface: solve, sweep, gen, check, oracle, render."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Optional, Sequence

from .files import (
    FormatError,
    LabelingFile,
    dump_json,
    generate_instance,
    instance_to_dict,
    load_instance,
    load_labeling,
    parse_direction,
)
from .geometry import LEFT, direction_from_theta, rects_overlap
from .model import Infeasible, Instance, SolveResult
from .oracle import DEFAULT_CAP, OracleRefused, brute_force
from .preprocess import obstacle_fixpoint
from .render import render_svg
from .routing import RoutingError, route_outer
from .solver_general import solve_general
from .solver_left import solve_left
from .sweep import sweep_solve
from .validity import find_violation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_MISMATCH = 4

SWEEP_COLUMNS = ["lo_dx", "lo_dy", "hi_dx", "hi_dy", "rep_dx", "rep_dy", "rep_theta", "optimum", "degenerate"]


def left_applicable(inst: Instance) -> bool:
    ys = [p.y for p in inst.points]
    return inst.direction == LEFT and len(set(ys)) == len(ys)


def solve(inst: Instance, mode: str = "auto") -> SolveResult:
    """Run the requested solver after obstacle propagation."""
    report = obstacle_fixpoint(inst) if inst.obstacles else None
    forced = {}
    if report is not None:
        forced = {"must_internal": report.must_internal, "must_external": report.must_external}
    if mode == "left" or (mode == "auto" and left_applicable(inst)):
        return solve_left(inst, **forced)
    if mode in ("general", "auto"):
        return solve_general(inst, **forced)
    raise ValueError(f"unknown mode {mode!r}")


def _with_direction(inst: Instance, args) -> Instance:
    if getattr(args, "theta", None) is not None and getattr(args, "direction", None) is not None:
        raise FormatError("give either --theta or --direction")
    if getattr(args, "theta", None) is not None:
        return inst.with_direction(direction_from_theta(args.theta))
    if getattr(args, "direction", None) is not None:
        return inst.with_direction(parse_direction(args.direction))
    return inst


def check_labeling(inst: Instance, lf: LabelingFile) -> list[str]:
    """Every rule the labeling breaks, as human-readable lines."""
    problems = []
    v = find_violation(inst, lf.labeling)
    if v is not None:
        problems.append(v.describe())
    routed = sorted(lf.routed, key=lambda r: r.index)
    for a in range(len(routed)):
        if routed[a].index not in lf.labeling.external:
            problems.append(f"routed label for non-external point {routed[a].index}")
        for b in range(a + 1, len(routed)):
            if rects_overlap(routed[a].label_rect, routed[b].label_rect):
                problems.append(f"external labels of points {routed[a].index} and {routed[b].index} overlap")
    return problems


def cmd_solve(args) -> int:
    inst = _with_direction(load_instance(args.input), args)
    result = solve(inst, args.mode)
    try:
        routed = route_outer(inst, result.labeling).routed
    except RoutingError as exc:
        print(f"routing skipped: {exc}", file=sys.stderr)
        routed = []
    lf = LabelingFile(result.labeling, result.optimum, inst.direction, result.solver, routed, args.theta)
    lf.valid = not check_labeling(inst, lf)
    if args.oracle_check:
        ref = brute_force(inst, cap=args.cap)
        if ref.optimum != result.optimum:
            print(f"oracle mismatch: solver {result.optimum}, oracle {ref.optimum}", file=sys.stderr)
            return EXIT_MISMATCH
    text = dump_json(lf.to_dict(), args.output)
    if not args.output:
        sys.stdout.write(text)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(inst, result.labeling, routed))
    return EXIT_OK if lf.valid else EXIT_MISMATCH


def cmd_sweep(args) -> int:
    inst = load_instance(args.input)
    if inst.obstacles:
        obstacle_fixpoint(inst)
    res = sweep_solve(inst, lambda i: solve(i, "general"))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    rows = []
    for iv in res.intervals:
        rows.append(iv)
    rows += res.boundaries
    for iv in rows:
        rep = iv.representative
        w.writerow([iv.lo.dx, iv.lo.dy, iv.hi.dx, iv.hi.dy, rep.dx, rep.dy, f"{rep.angle():.12f}", iv.value, int(iv.degenerate)])
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(buf.getvalue())
    best = res.best
    print(f"best direction {best.representative} (theta {best.representative.angle():.12f}): {best.value} internal")
    if args.output:
        result = solve(inst.with_direction(best.representative), "general")
        lf = LabelingFile(result.labeling, result.optimum, best.representative, result.solver)
        lf.valid = not check_labeling(inst.with_direction(best.representative), lf)
        dump_json(lf.to_dict(), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = generate_instance(args.n, args.seed, args.dmin, args.box)
    text = dump_json(instance_to_dict(inst), args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    inst = load_instance(args.input)
    lf = load_labeling(args.labeling, inst.n)
    inst = inst.with_direction(lf.direction)
    problems = check_labeling(inst, lf)
    for p in problems:
        print(p)
    if problems:
        return EXIT_MISMATCH
    print("valid")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _with_direction(load_instance(args.input), args)
    res = brute_force(inst, cap=args.cap)
    lf = LabelingFile(res.witness, res.optimum, inst.direction, "oracle", theta=args.theta, valid=True)
    text = dump_json(lf.to_dict(), args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    inst = load_instance(args.input)
    labeling, routed = None, []
    if args.labeling:
        lf = load_labeling(args.labeling, inst.n)
        inst = inst.with_direction(lf.direction)
        labeling, routed = lf.labeling, lf.routed
    svg = render_svg(inst, labeling, routed)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixlabel", description="Mixed internal/external point labeling.")
    sub = parser.add_subparsers(dest="command", required=True)

    def direction_flags(p):
        p.add_argument("--theta", type=float, help="leader slope in radians, [0, 2*pi)")
        p.add_argument("--direction", help="leader direction as dx,dy")

    p = sub.add_parser("solve", help="maximise internal labels for one direction")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    direction_flags(p)
    p.add_argument("--mode", choices=["auto", "left", "general"], default="auto")
    p.add_argument("--svg")
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="optimise over all leader directions")
    p.add_argument("--input", required=True)
    p.add_argument("--report", help="CSV file for the per-interval optima")
    p.add_argument("--output", help="labeling file for the best direction")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dmin", default="0.15")
    p.add_argument("--box", default=None, help="side of the square the points are drawn from")
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="validate a labeling file")
    p.add_argument("--input", required=True)
    p.add_argument("--labeling", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    direction_flags(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("render", help="draw an instance and optional labeling as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--labeling")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FormatError, OracleRefused, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
