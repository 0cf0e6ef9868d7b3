"""
Continuous waypoint refinement on Steiner-zone boundaries.

For a waypoint between fixed neighbours the best position is either on the
neighbour segment (zero detour, when the segment crosses the zone) or on the
zone boundary. The boundary is searched arc by arc: the nearest point of each
member circle to the neighbour segment seeds the search, which is then refined
along the member's feasible arc.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy.optimize import minimize_scalar

from .acs import Path, add_operator, candidate_vertices, waypoint_graph
from .geometry import (
    EPS,
    CircleGeom,
    Point,
    closest_point_on_circle_to_segment,
    detour,
    distance,
    point_along,
    segment_inside_interval,
)
from .instances import Solution, Waypoint
from .rszd import SteinerZone

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
ARC_SAMPLES = 64
REFINED_MINIMA = 3


@dataclass(frozen=True)
class ArcSearchParams:
    rounds: int = 5
    max_sweeps: int = 50
    tol: float = 1e-4
    eps: float = EPS

    @classmethod
    def from_settings(cls, **overrides):
        config = settings.CRASZE["ARC_SEARCH"]
        values = {
            "rounds": config["ROUNDS"],
            "max_sweeps": config["MAX_SWEEPS"],
            "tol": config["TOL"],
            "eps": settings.CRASZE["EPS"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class FeasibleArc:
    circle_id: int
    circle: CircleGeom
    # counterclockwise (start, end) angle pairs, start <= end, end - start <= 2*pi
    intervals: tuple[tuple[float, float], ...]

    def sample(self, per_interval):
        return [
            self.circle.point_at(theta)
            for lo, hi in self.intervals
            for theta in np.linspace(lo, hi, per_interval)
        ]


@dataclass(frozen=True)
class Stop:
    zone: SteinerZone
    point: Point


# ---------------------------------
# Feasible arcs
# ---------------------------------


def _wrapped(lo, hi):
    lo_wrapped = lo % TWO_PI
    hi_wrapped = lo_wrapped + (hi - lo)
    if hi_wrapped <= TWO_PI:
        return [(lo_wrapped, hi_wrapped)]
    return [(lo_wrapped, TWO_PI), (0.0, hi_wrapped - TWO_PI)]


def _inside_other(circle, other, eps):
    """Angular intervals of circle's boundary lying in the closed disk of other"""
    d = distance(circle.center, other.center)
    if d + circle.radius <= other.radius + eps:
        return [(0.0, TWO_PI)]
    if d > circle.radius + other.radius + eps or d <= eps:
        return []
    cos_half = (d * d + circle.radius**2 - other.radius**2) / (2 * d * circle.radius)
    half = math.acos(min(1.0, max(-1.0, cos_half)))
    toward = math.atan2(other.center.y - circle.center.y, other.center.x - circle.center.x)
    return _wrapped(toward - half, toward + half)


def _intersect(first, second):
    out = []
    for a_lo, a_hi in first:
        for b_lo, b_hi in second:
            lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
            if lo <= hi:
                out.append((lo, hi))
    return sorted(out)


def _join_seam(intervals):
    if len(intervals) >= 2 and intervals[0][0] == 0.0 and intervals[-1][1] == TWO_PI:
        head = intervals[0]
        tail = intervals[-1]
        intervals = intervals[1:-1] + [(tail[0], head[1] + TWO_PI)]
    return intervals


def feasible_arcs(zone, eps=EPS):
    arcs = []
    for member in zone.members:
        intervals = [(0.0, TWO_PI)]
        for other in zone.members:
            if other is member:
                continue
            intervals = _intersect(intervals, _inside_other(member.geom, other.geom, eps))
            if not intervals:
                break
        if intervals:
            arcs.append(FeasibleArc(member.id, member.geom, tuple(_join_seam(intervals))))
    return arcs


# ---------------------------------
# Waypoint search
# ---------------------------------


def _refine_on_interval(circle, lo, hi, prev, nxt):
    thetas = np.linspace(lo, hi, ARC_SAMPLES)
    xs = circle.center.x + circle.radius * np.cos(thetas)
    ys = circle.center.y + circle.radius * np.sin(thetas)
    costs = np.hypot(xs - prev.x, ys - prev.y) + np.hypot(xs - nxt.x, ys - nxt.y)

    def cost(theta):
        p = circle.point_at(theta)
        return detour(prev, p, nxt)

    # sampled local minima, best first
    minima = [
        k
        for k in range(ARC_SAMPLES)
        if (k == 0 or costs[k] <= costs[k - 1]) and (k == ARC_SAMPLES - 1 or costs[k] <= costs[k + 1])
    ]
    minima.sort(key=lambda k: costs[k])

    best_theta = thetas[int(np.argmin(costs))]
    best_cost = float(costs.min())
    for k in minima[:REFINED_MINIMA]:
        left = thetas[max(k - 1, 0)]
        right = thetas[min(k + 1, ARC_SAMPLES - 1)]
        if right - left <= 0:
            continue
        result = minimize_scalar(cost, bounds=(left, right), method="bounded", options={"xatol": 1e-12})
        if result.fun < best_cost:
            best_theta, best_cost = result.x, result.fun
    return circle.point_at(best_theta)


def _segment_inside_zone(prev, nxt, zone, eps):
    lo, hi = 0.0, 1.0
    for circle in zone.circles:
        interval = segment_inside_interval(prev, nxt, circle, eps)
        if interval is None:
            return None
        lo, hi = max(lo, interval[0]), min(hi, interval[1])
        if lo > hi:
            return None
    return lo, hi


def best_waypoint_in_zone(prev, nxt, zone, eps=EPS):
    crossing = _segment_inside_zone(prev, nxt, zone, eps)
    if crossing is not None:
        # every in-zone point of the segment is a zero detour; take the middle one
        return point_along(prev, nxt, (crossing[0] + crossing[1]) / 2)

    candidates = []
    for arc in feasible_arcs(zone, eps):
        close = closest_point_on_circle_to_segment(arc.circle, prev, nxt, eps)
        if zone.contains(close, eps):
            candidates.append(close)
        for lo, hi in arc.intervals:
            candidates.append(_refine_on_interval(arc.circle, lo, hi, prev, nxt))
    candidates.extend(zone.vertices)
    if not candidates:
        return zone.center
    return min(candidates, key=lambda p: detour(prev, p, nxt))


def stops_cost(stops, depot_start, depot_end):
    points = [depot_start] + [s.point for s in stops] + [depot_end]
    return sum(distance(a, b) for a, b in zip(points, points[1:]))


def arc_search(stops, depot_start, depot_end, max_sweeps=50, tol=1e-4, eps=EPS):
    """Gauss-Seidel sweeps over every interior waypoint; a move never lengthens its local detour"""
    stops = list(stops)
    for sweep in range(1, max_sweeps + 1):
        gained = 0.0
        for j, stop in enumerate(stops):
            prev = depot_start if j == 0 else stops[j - 1].point
            nxt = depot_end if j == len(stops) - 1 else stops[j + 1].point
            candidate = best_waypoint_in_zone(prev, nxt, stop.zone, eps)
            old = detour(prev, stop.point, nxt)
            new = detour(prev, candidate, nxt)
            if new <= old:
                gained += old - new
                stops[j] = Stop(stop.zone, candidate)
        logger.debug("arc search sweep %d gained %.6f", sweep, gained)
        if gained < tol:
            break
    return stops


def refine_ceop(solution, layout, graph, params=None):
    """Alternate arc search and insertion rounds until neither changes the route"""
    params = params or ArcSearchParams()
    zones = layout.zone_map()
    depot_start = graph.points[graph.start]
    depot_end = graph.points[graph.end]
    stops = [Stop(zones[w.zone_id], w.point) for w in solution.sequence]

    for round_number in range(1, params.rounds + 1):
        before = [s.point for s in stops]
        stops = arc_search(stops, depot_start, depot_end, params.max_sweeps, params.tol, params.eps)
        moved = any(distance(a, s.point) > params.eps for a, s in zip(before, stops))

        visited = {s.zone.id for s in stops}
        expanded = waypoint_graph(
            graph, [(s.point, s.zone.id) for s in stops], candidate_vertices(graph, visited)
        )
        path = Path.from_nodes(expanded, list(range(1, len(stops) + 1)))
        path, _ = add_operator(expanded, path, expanded.available_after(path))
        inserted = len(path.nodes) - len(stops)
        stops = [Stop(zones[int(expanded.zone_of[n])], expanded.points[n]) for n in path.nodes]

        logger.debug(
            "refine round %d: moved=%s inserted=%d cost=%.4f",
            round_number,
            moved,
            inserted,
            stops_cost(stops, depot_start, depot_end),
        )
        if not moved and not inserted:
            break

    return Solution(
        instance_name=solution.instance_name,
        algorithm=solution.algorithm,
        seed=solution.seed,
        prize=sum(s.zone.prize for s in stops),
        cost=stops_cost(stops, depot_start, depot_end),
        budget=solution.budget,
        runtime_s=solution.runtime_s,
        sequence=tuple(Waypoint(s.zone.id, s.zone.member_ids, s.point) for s in stops),
        truncated=solution.truncated,
    )
