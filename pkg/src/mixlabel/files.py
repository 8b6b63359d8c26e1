"""JSON file formats and the random instance generator.

Coordinates are written as exact strings: plain decimals when the value has
a terminating decimal expansion, ``p/q`` otherwise.  Binary floats are only
accepted when their shortest decimal form is exactly the stored value.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Any, Optional

from .geometry import Direction, Point, Rect, direction_from_theta
from .model import Instance, Labeling, is_convex_ccw
from .routing import RoutedExternal


class FormatError(ValueError):
    pass


def parse_scalar(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise FormatError("booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise FormatError(f"non-finite number {value!r}")
        exact = Fraction(value)
        if Fraction(repr(value)) != exact:
            raise FormatError(f"float {value!r} is not exactly representable; write it as a decimal string")
        return exact
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad number {value!r}") from exc
    raise FormatError(f"expected a number, got {type(value).__name__}")


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    d, twos, fives = x.denominator, 0, 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    # terminating decimal: scale to an exact integer so no digits are rounded
    k = max(twos, fives)
    digits = abs(x.numerator) * 10**k // x.denominator
    text = format(Decimal((0 if x >= 0 else 1, tuple(map(int, str(digits))), -k)), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _point(v: Any) -> Point:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise FormatError(f"expected [x, y], got {v!r}")
    return Point(parse_scalar(v[0]), parse_scalar(v[1]))


def _dump_point(p: Point) -> list[str]:
    return [format_scalar(p.x), format_scalar(p.y)]


def parse_direction(text: str) -> Direction:
    parts = text.split(",")
    if len(parts) != 2:
        raise FormatError("direction must look like dx,dy")
    try:
        return Direction.of(parse_scalar(parts[0]), parse_scalar(parts[1]))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise FormatError("instance file must hold a JSON object")
    pts = data.get("points")
    if not isinstance(pts, list) or not pts:
        raise FormatError("instance needs a nonempty 'points' list")
    points = tuple(_point(p) for p in pts)
    label = data.get("label", {})
    w = parse_scalar(label.get("w", 1))
    h = parse_scalar(label.get("h", 1))
    if "direction" in data and "theta" in data:
        raise FormatError("give either 'theta' or 'direction', not both")
    if "direction" in data:
        d = data["direction"]
        if not isinstance(d, (list, tuple)) or len(d) != 2:
            raise FormatError("direction must be [dx, dy]")
        try:
            direction = Direction.of(parse_scalar(d[0]), parse_scalar(d[1]))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    elif "theta" in data:
        try:
            direction = direction_from_theta(float(data["theta"]))
        except (TypeError, ValueError) as exc:
            raise FormatError(str(exc)) from exc
    else:
        direction = Direction(-1, 0)
    mp = data.get("map")
    map_polygon = None if mp is None else tuple(_point(p) for p in mp)
    if map_polygon is not None and not is_convex_ccw(map_polygon):
        raise FormatError("map polygon must be convex and counterclockwise")
    obstacles = tuple(tuple(_point(p) for p in poly) for poly in data.get("obstacles", []))
    try:
        return Instance(points, direction, w, h, map_polygon, obstacles)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def instance_to_dict(inst: Instance, theta: Optional[float] = None) -> dict:
    out: dict = {
        "points": [_dump_point(p) for p in inst.points],
        "label": {"w": format_scalar(inst.w), "h": format_scalar(inst.h)},
    }
    if theta is not None:
        out["theta"] = theta
    else:
        out["direction"] = [inst.direction.dx, inst.direction.dy]
    if inst.map_polygon is not None:
        out["map"] = [_dump_point(p) for p in inst.map_polygon]
    if inst.obstacles:
        out["obstacles"] = [[_dump_point(p) for p in poly] for poly in inst.obstacles]
    return out


def load_instance(path: str) -> Instance:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return instance_from_dict(data)


def dump_json(data: dict, path: Optional[str]) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


@dataclass
class LabelingFile:
    labeling: Labeling
    optimum: int
    direction: Direction
    solver: str
    routed: list[RoutedExternal] = field(default_factory=list)
    theta: Optional[float] = None
    valid: Optional[bool] = None

    def to_dict(self) -> dict:
        ext = []
        by_index = {r.index: r for r in self.routed}
        for i in sorted(self.labeling.external):
            rec: dict = {"index": i}
            r = by_index.get(i)
            if r is not None:
                rec["boundary_exit"] = _dump_point(r.boundary_exit)
                rec["outer_path"] = [_dump_point(p) for p in r.outer_path]
                rect = r.label_rect
                rec["label_rect"] = [format_scalar(v) for v in (rect.x0, rect.y0, rect.x1, rect.y1)]
            ext.append(rec)
        return {
            "internal": sorted(self.labeling.internal),
            "external": ext,
            "optimum": self.optimum,
            "theta": self.theta if self.theta is not None else self.direction.angle(),
            "direction": [self.direction.dx, self.direction.dy],
            "solver": self.solver,
            "valid": self.valid,
        }

    @classmethod
    def from_dict(cls, data: dict, n: int) -> "LabelingFile":
        try:
            internal = frozenset(int(i) for i in data["internal"])
            records = data.get("external", [])
            external = frozenset(int(r["index"]) if isinstance(r, dict) else int(r) for r in records)
            labeling = Labeling(internal, external)
            labeling.check_partition(n)
            routed = []
            for r in records:
                if isinstance(r, dict) and "label_rect" in r:
                    x0, y0, x1, y1 = (parse_scalar(v) for v in r["label_rect"])
                    path = tuple(_point(p) for p in r["outer_path"])
                    routed.append(
                        RoutedExternal(int(r["index"]), _point(r["boundary_exit"]), path, Rect(Point(x0, y0), x1 - x0, y1 - y0))
                    )
            d = data.get("direction", [-1, 0])
            return cls(
                labeling,
                int(data.get("optimum", len(internal))),
                Direction.of(parse_scalar(d[0]), parse_scalar(d[1])),
                str(data.get("solver", "unknown")),
                routed,
                data.get("theta"),
                None,  # attestation is recomputed by the caller
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad labeling file: {exc}") from exc


def load_labeling(path: str, n: int) -> LabelingFile:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    return LabelingFile.from_dict(data, n)


# --- generator --------------------------------------------------------------


def default_box(n: int) -> Fraction:
    return Fraction(max(2, math.ceil(math.sqrt(n))))


def generate_points(
    n: int,
    seed: int,
    dmin: float | str | Fraction = Fraction(3, 20),
    box: float | str | Fraction | None = None,
    digits: int = 4,
    max_attempts: int = 200_000,
) -> list[Point]:
    """n points in [0, box]^2 with pairwise distance >= dmin, reproducible from seed.

    Coordinates are decimals with ``digits`` fractional digits; x- and
    y-coordinates are kept pairwise distinct so no two leaders are ever
    collinear for axis-parallel directions.
    """
    if n < 1:
        raise ValueError("n must be positive")
    dmin = Fraction(str(dmin)) if isinstance(dmin, float) else Fraction(dmin)
    side = default_box(n) if box is None else (Fraction(str(box)) if isinstance(box, float) else Fraction(box))
    rng = random.Random(seed)
    scale = 10**digits
    top = int(side * scale)
    pts: list[Point] = []
    xs: set[Fraction] = set()
    ys: set[Fraction] = set()
    d2 = dmin * dmin
    attempts = 0
    while len(pts) < n:
        attempts += 1
        if attempts > max_attempts:
            raise ValueError(f"could not place {n} points with dmin={dmin} in a box of side {side}")
        p = Point(Fraction(rng.randint(0, top), scale), Fraction(rng.randint(0, top), scale))
        if p.x in xs or p.y in ys:
            continue
        if any((p.x - q.x) ** 2 + (p.y - q.y) ** 2 < d2 for q in pts):
            continue
        pts.append(p)
        xs.add(p.x)
        ys.add(p.y)
    return pts


def generate_instance(n: int, seed: int, dmin=Fraction(3, 20), box=None, direction: Direction = Direction(-1, 0)) -> Instance:
    return Instance(tuple(generate_points(n, seed, dmin, box)), direction)

