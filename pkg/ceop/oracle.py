"""
Brute-force references for small instances.

Nothing here is used by the solvers; tests and the ``oracle`` command compare
solver output against these exhaustive or densely sampled answers.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .exceptions import TooLarge
from .geometry import EPS, Point

logger = logging.getLogger(__name__)

PRIZE_TIE = 1e-9
ON_CIRCLE_TOL = 1e-6


@dataclass
class OracleBudgetedSearch:
    """Exhaustive search state; ``best_nodes`` excludes the depots"""

    budget: float
    best_prize: float = 0.0
    best_cost: float = math.inf
    best_nodes: list[int] = field(default_factory=list)
    nodes_expanded: int = 0

    def offer(self, prize, cost, nodes):
        if cost > self.budget:
            return
        if prize > self.best_prize + PRIZE_TIE or (
            abs(prize - self.best_prize) <= PRIZE_TIE and cost < self.best_cost
        ):
            self.best_prize = prize
            self.best_cost = cost
            self.best_nodes = list(nodes)


def brute_force_sop(graph, budget=None, prune=True, max_zones=None):
    """Exact optimum over zone subsets, visit orders and per-zone vertex choices"""
    limit = max_zones if max_zones is not None else settings.CRASZE["ORACLE"]["MAX_ZONES"]
    if graph.zone_count > limit:
        raise TooLarge(graph.zone_count, limit)

    budget = graph.budget if budget is None else budget
    d = graph.dist_rows
    visit = graph.visit_cost.tolist()
    end = graph.end
    zone_nodes = {z: nodes.tolist() for z, nodes in sorted(graph.zone_nodes.items())}
    search = OracleBudgetedSearch(budget=budget)

    def expand(current, cost, prize, visited, nodes, remaining):
        search.nodes_expanded += 1
        search.offer(prize, cost + d[current][end], nodes)
        if prune and prize + remaining < search.best_prize - PRIZE_TIE:
            return
        for zone, candidates in zone_nodes.items():
            if zone in visited:
                continue
            zone_prize = graph.zone_prizes[zone]
            visited.add(zone)
            for node in candidates:
                next_cost = cost + d[current][node] + visit[node]
                # triangle inequality: the rest of the route is at least the direct leg home
                if prune and next_cost + d[node][end] > budget:
                    continue
                nodes.append(node)
                expand(node, next_cost, prize + zone_prize, visited, nodes, remaining - zone_prize)
                nodes.pop()
            visited.discard(zone)

    expand(graph.start, 0.0, 0.0, set(), [], sum(graph.zone_prizes[z] for z in zone_nodes))
    logger.debug(
        "oracle %s: prize %.4f after %d expansions", graph.name, search.best_prize, search.nodes_expanded
    )
    return search


# ---------------------------------
# Zone semantics
# ---------------------------------


def _inside_all(zone, xs, ys, tol=0.0):
    inside = np.ones(xs.shape, dtype=bool)
    for c in zone.circles:
        inside &= np.hypot(xs - c.center.x, ys - c.center.y) <= c.radius + tol
    return inside


def _cross(a, b, xs, ys):
    return (b.x - a.x) * (ys - a.y) - (b.y - a.y) * (xs - a.x)


def _edge_circle(zone, a, b):
    """Member whose arc from a to b bulges right of a->b and stays inside the zone"""
    length = math.hypot(b.x - a.x, b.y - a.y)
    if length == 0:
        return None
    right = ((b.y - a.y) / length, -(b.x - a.x) / length)
    for c in zone.circles:
        through_a = abs(math.hypot(a.x - c.center.x, a.y - c.center.y) - c.radius) <= ON_CIRCLE_TOL
        through_b = abs(math.hypot(b.x - c.center.x, b.y - c.center.y) - c.radius) <= ON_CIRCLE_TOL
        if not (through_a and through_b):
            continue
        middle = Point(c.center.x + c.radius * right[0], c.center.y + c.radius * right[1])
        if zone.contains(middle, ON_CIRCLE_TOL):
            return c
    return None


def vertex_arc_region(zone, xs, ys):
    """Membership implied by the stored vertices: vertex polygon plus one circular cap per edge"""
    if zone.degree == 1:
        c = zone.circles[0]
        return np.hypot(xs - c.center.x, ys - c.center.y) <= c.radius

    vertices = list(zone.vertices)
    region = np.zeros(xs.shape, dtype=bool)
    if len(vertices) < 2:
        return region

    edges = list(zip(vertices, vertices[1:] + vertices[:1]))
    if len(vertices) >= 3:
        polygon = np.ones(xs.shape, dtype=bool)
        for a, b in edges:
            polygon &= _cross(a, b, xs, ys) >= 0
        region |= polygon
    for a, b in edges:
        circle = _edge_circle(zone, a, b)
        if circle is None:
            continue
        cap = (_cross(a, b, xs, ys) < 0) & (
            np.hypot(xs - circle.center.x, ys - circle.center.y) <= circle.radius
        )
        region |= cap
    return region


def monte_carlo_zone_check(zone, samples=None, rng=None, margin=1e-7):
    """Count sample points where "inside every member" and the vertex-arc region disagree"""
    if samples is None:
        samples = settings.CRASZE["ORACLE"]["MONTE_CARLO_SAMPLES"]
    if rng is None:
        rng = np.random.default_rng()
    low_x = min(c.center.x - c.radius for c in zone.circles)
    high_x = max(c.center.x + c.radius for c in zone.circles)
    low_y = min(c.center.y - c.radius for c in zone.circles)
    high_y = max(c.center.y + c.radius for c in zone.circles)
    xs = rng.uniform(low_x, high_x, samples)
    ys = rng.uniform(low_y, high_y, samples)

    # points hugging a member boundary are ambiguous at floating-point precision
    clear = np.ones(samples, dtype=bool)
    for c in zone.circles:
        clear &= np.abs(np.hypot(xs - c.center.x, ys - c.center.y) - c.radius) > margin

    disagree = _inside_all(zone, xs, ys) != vertex_arc_region(zone, xs, ys)
    return int(np.count_nonzero(disagree & clear))


# ---------------------------------
# Waypoint reference
# ---------------------------------


def sampled_best_waypoint(prev, nxt, zone, n_boundary=None, n_grid=None, eps=EPS):
    config = settings.CRASZE["ORACLE"]
    n_boundary = config["BOUNDARY_SAMPLES"] if n_boundary is None else n_boundary
    n_grid = config["GRID_SAMPLES"] if n_grid is None else n_grid
    if n_boundary < 360:
        raise ValueError("boundary sweep needs at least 360 samples")
    xs_parts = []
    ys_parts = []

    thetas = np.linspace(0.0, 2 * math.pi, n_boundary, endpoint=False)
    for c in zone.circles:
        xs_parts.append(c.center.x + c.radius * np.cos(thetas))
        ys_parts.append(c.center.y + c.radius * np.sin(thetas))

    low_x = min(c.center.x - c.radius for c in zone.circles)
    high_x = max(c.center.x + c.radius for c in zone.circles)
    low_y = min(c.center.y - c.radius for c in zone.circles)
    high_y = max(c.center.y + c.radius for c in zone.circles)
    grid_x, grid_y = np.meshgrid(np.linspace(low_x, high_x, n_grid), np.linspace(low_y, high_y, n_grid))
    xs_parts.append(grid_x.ravel())
    ys_parts.append(grid_y.ravel())

    ts = np.linspace(0.0, 1.0, n_boundary)
    xs_parts.append(prev.x + ts * (nxt.x - prev.x))
    ys_parts.append(prev.y + ts * (nxt.y - prev.y))

    xs_parts.append(np.array([v.x for v in zone.vertices] + [zone.center.x]))
    ys_parts.append(np.array([v.y for v in zone.vertices] + [zone.center.y]))

    xs = np.concatenate(xs_parts)
    ys = np.concatenate(ys_parts)
    keep = _inside_all(zone, xs, ys, tol=eps)
    xs, ys = xs[keep], ys[keep]
    detours = np.hypot(xs - prev.x, ys - prev.y) + np.hypot(xs - nxt.x, ys - nxt.y)
    best = int(np.argmin(detours))
    return Point(float(xs[best]), float(ys[best])), float(detours[best])
