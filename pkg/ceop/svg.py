"""
SVG export of layouts and routes.

Drawing happens in instance coordinates inside a group flipped on the y axis,
so the numbers in the markup are the instance's own coordinates.
"""

import math

from django.template.loader import render_to_string

from .arc_search import TWO_PI, feasible_arcs

PIXELS = 800


def _fmt(value):
    return f"{value:.6f}"


def _point(p):
    return {"x": _fmt(p.x), "y": _fmt(p.y)}


def _arc_pieces(lo, hi):
    # a single SVG arc command cannot draw a full circle
    if hi - lo >= TWO_PI - 1e-12:
        middle = lo + math.pi
        return [(lo, middle), (middle, hi)]
    return [(lo, hi)]


def arc_path(arc):
    r = _fmt(arc.circle.radius)
    commands = []
    for lo, hi in arc.intervals:
        for a, b in _arc_pieces(lo, hi):
            start = arc.circle.point_at(a)
            end = arc.circle.point_at(b)
            large = 1 if b - a > math.pi else 0
            commands.append(
                f"M {_fmt(start.x)} {_fmt(start.y)} "
                f"A {r} {r} 0 {large} 1 {_fmt(end.x)} {_fmt(end.y)}"
            )
    return " ".join(commands)


def _frame(instance):
    pad = instance.radius
    xs = [instance.depot_start.x, instance.depot_end.x] + [c.center.x for c in instance.circles]
    ys = [instance.depot_start.y, instance.depot_end.y] + [c.center.y for c in instance.circles]
    min_x, max_x = min(xs) - pad, max(xs) + pad
    min_y, max_y = min(ys) - pad, max(ys) + pad
    width = max_x - min_x
    height = max_y - min_y
    scale = PIXELS / max(width, height)
    return {
        "view_box": f"{_fmt(min_x)} {_fmt(-max_y)} {_fmt(width)} {_fmt(height)}",
        "width": round(width * scale),
        "height": round(height * scale),
        "stroke": _fmt(max(width, height) / 500),
        "dot": _fmt(max(width, height) / 250),
    }


def _base_context(instance, layout):
    context = _frame(instance)
    context.update(
        {
            "title": instance.name,
            "circles": [
                {"id": c.id, "cx": _fmt(c.center.x), "cy": _fmt(c.center.y), "r": _fmt(c.radius)}
                for c in instance.circles
            ],
            "depot_start": _point(instance.depot_start),
            "depot_end": _point(instance.depot_end),
            "zones": [],
        }
    )
    if layout is not None:
        context["zones"] = [
            {
                "id": zone.id,
                "arcs": [arc_path(arc) for arc in feasible_arcs(zone)] if zone.degree > 1 else [],
                "vertices": [_point(v) for v in zone.vertices],
                "center": _point(zone.center),
            }
            for zone in layout.zones
        ]
    return context


def render_layout_svg(instance, layout):
    return render_to_string("ceop/layout.svg", _base_context(instance, layout))


def render_solution_svg(instance, solution, layout=None):
    context = _base_context(instance, layout)
    points = [instance.depot_start] + solution.waypoints + [instance.depot_end]
    context["route"] = " ".join(f"{_fmt(p.x)},{_fmt(p.y)}" for p in points)
    context["waypoints"] = [_point(p) for p in solution.waypoints]
    context["summary"] = (
        f"{solution.algorithm}: prize {solution.prize:.4f} cost {solution.cost:.4f}"
    )
    return render_to_string("ceop/solution.svg", context)
