"""Deterministic SVG drawing of an instance and its labeling."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .geometry import Point
from .model import Instance, Labeling
from .routing import RoutedExternal, clip_leader_to_map

MARGIN = 2


def _num(x: Fraction) -> str:
    text = f"{float(x):.4f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def render_svg(
    inst: Instance,
    labeling: Optional[Labeling] = None,
    routed: Sequence[RoutedExternal] = (),
    scale: int = 40,
) -> str:
    """SVG text; identical inputs give identical bytes."""
    poly = inst.map_or_default()
    xs = [p.x for p in poly] + [r.label_rect.x0 for r in routed] + [r.label_rect.x1 for r in routed]
    ys = [p.y for p in poly] + [r.label_rect.y0 for r in routed] + [r.label_rect.y1 for r in routed]
    x0, x1 = min(xs) - MARGIN, max(xs) + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + MARGIN

    def X(x):
        return _num((x - x0) * scale)

    def Y(y):  # SVG y grows downwards
        return _num((y1 - y) * scale)

    def pts(ps: Sequence[Point]) -> str:
        return " ".join(f"{X(p.x)},{Y(p.y)}" for p in ps)

    def rect(x, y, w, h, cls):
        return (
            f'<rect class="{cls}" x="{X(x)}" y="{Y(y + h)}" '
            f'width="{_num(w * scale)}" height="{_num(h * scale)}"/>'
        )

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num((x1 - x0) * scale)}" '
        f'height="{_num((y1 - y0) * scale)}">',
        "<style>.map{fill:#f7f7f2;stroke:#555}.obstacle{fill:#ccc;stroke:#888}"
        ".internal{fill:#cfe3ff;stroke:#2060c0}.external{fill:#ffe0c0;stroke:#c06020}"
        ".leader{stroke:#c06020;fill:none}.point{fill:#000}</style>",
        f'<polygon class="map" points="{pts(poly)}"/>',
    ]
    for ob in inst.obstacles:
        out.append(f'<polygon class="obstacle" points="{pts(ob)}"/>')
    if labeling is not None:
        for i in sorted(labeling.internal):
            p = inst.points[i]
            out.append(rect(p.x, p.y, inst.w, inst.h, "internal"))
        by_index = {r.index: r for r in routed}
        for i in sorted(labeling.external):
            p = inst.points[i]
            r = by_index.get(i)
            end = r.boundary_exit if r is not None else clip_leader_to_map(inst, i)
            path = [p, end] + ([r.outer_path[1]] if r is not None else [])
            out.append(f'<polyline class="leader" points="{pts(path)}"/>')
            if r is not None:
                lr = r.label_rect
                out.append(rect(lr.x0, lr.y0, lr.x1 - lr.x0, lr.y1 - lr.y0, "external"))
    for p in inst.points:
        out.append(f'<circle class="point" cx="{X(p.x)}" cy="{Y(p.y)}" r="2.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
