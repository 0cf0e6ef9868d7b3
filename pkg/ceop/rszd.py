"""
Randomized Steiner Zone Discretization.

A Steiner zone is the convex region shared by a group of mutually overlapping
target circles. Visiting any point of it collects every member's prize. The
discretization greedily groups circles into zones, repeats the greedy pass
over shuffled circle orders and keeps the layout with the fewest zones.
"""

import logging
import math
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np
from django.conf import settings

from .exceptions import DegenerateCircles
from .geometry import EPS, Point, circle_intersections, distance, point_in_circle

logger = logging.getLogger(__name__)

VERTEX_MERGE_TOL = 1e-7


@dataclass(frozen=True)
class SteinerZone:
    id: int
    members: tuple
    vertices: tuple[Point, ...]
    center: Point
    prize: float

    @property
    def member_ids(self):
        return tuple(m.id for m in self.members)

    @property
    def degree(self):
        return len(self.members)

    @property
    def circles(self):
        return [m.geom for m in self.members]

    def contains(self, p, eps=EPS):
        return all(point_in_circle(p, c, eps) for c in self.circles)


@dataclass(frozen=True)
class SzLayout:
    zones: tuple[SteinerZone, ...]
    source_instance: str
    seed: int
    iterations_used: int

    def zone_map(self):
        return {z.id: z for z in self.zones}

    def zone_of_circle(self):
        return {cid: z.id for z in self.zones for cid in z.member_ids}


@dataclass(frozen=True)
class RszdParams:
    n_iter: int = 10
    max_degree: int = 1
    eps: float = EPS

    def __post_init__(self):
        if self.n_iter < 1 or self.max_degree < 1 or self.eps <= 0:
            raise ValueError("RSZD parameters must be positive")

    @classmethod
    def from_settings(cls, instance, n_iter=None, max_degree=None):
        """Defaults from settings; the degree cap falls back to the drone count for TDDP"""
        config = settings.CRASZE["RSZD"]
        if max_degree is None:
            max_degree = config["MAX_DEGREE"]
        if max_degree is None:
            max_degree = instance.tddp.n_drones if instance.is_tddp else len(instance.circles)
        return cls(
            n_iter=n_iter if n_iter is not None else config["ITERATIONS"],
            max_degree=max_degree,
            eps=settings.CRASZE["EPS"],
        )


def zone_center(zone):
    if zone.degree == 1:
        return zone.members[0].center
    return _mean_point(zone.vertices)


def _mean_point(points):
    return Point(
        sum(p.x for p in points) / len(points),
        sum(p.y for p in points) / len(points),
    )


def zone_vertices(geoms, eps=EPS):
    """Pairwise boundary intersections lying inside every circle, counterclockwise"""
    found = []
    for a, b in combinations(geoms, 2):
        for p in circle_intersections(a, b, eps):
            if all(point_in_circle(p, c, eps) for c in geoms):
                if not any(distance(p, q) <= VERTEX_MERGE_TOL for q in found):
                    found.append(p)
    if len(found) < 2:
        return tuple(found)
    middle = _mean_point(found)
    found.sort(key=lambda p: math.atan2(p.y - middle.y, p.x - middle.x))
    return tuple(found)


def singleton_zone(zone_id, circle):
    return SteinerZone(
        id=zone_id,
        members=(circle,),
        vertices=(),
        center=circle.center,
        prize=circle.prize,
    )


def _pair_has_shared_point(a, b, others, eps):
    try:
        points = circle_intersections(a, b, eps)
    except DegenerateCircles:
        return False
    return any(all(point_in_circle(p, o, eps) for o in others) for p in points)


def try_add_circle(zone, circle, eps=EPS):
    """Grow zone by circle, or return None when the pair conditions fail"""
    # every member must overlap the newcomer
    for member in zone.members:
        if distance(member.center, circle.center) > member.radius + circle.radius + eps:
            return None

    geoms = zone.circles + [circle.geom]
    for i, j in combinations(range(len(geoms)), 2):
        others = [g for k, g in enumerate(geoms) if k not in (i, j)]
        if not _pair_has_shared_point(geoms[i], geoms[j], others, eps):
            return None

    members = zone.members + (circle,)
    vertices = zone_vertices(geoms, eps)
    grown = SteinerZone(
        id=zone.id,
        members=members,
        vertices=vertices,
        center=_mean_point(vertices),
        prize=sum(m.prize for m in members),
    )
    return grown


def build_layout_once(circles, max_degree, eps=EPS, source_instance="", seed=0):
    remaining = list(circles)
    zones = []
    while remaining:
        zone = singleton_zone(len(zones) + 1, remaining.pop(0))
        unused = []
        for circle in remaining:
            if zone.degree < max_degree:
                grown = try_add_circle(zone, circle, eps)
                if grown is not None:
                    zone = grown
                    continue
            unused.append(circle)
        remaining = unused
        zones.append(zone)
    return SzLayout(
        zones=tuple(zones),
        source_instance=source_instance,
        seed=seed,
        iterations_used=1,
    )


def rszd(instance, params, seed):
    circles = list(instance.circles)
    children = np.random.SeedSequence(seed).spawn(params.n_iter)

    best = None
    best_iteration = 0
    for iteration, child in enumerate(children, start=1):
        if iteration == 1:
            order = circles
        else:
            permutation = np.random.default_rng(child).permutation(len(circles))
            order = [circles[i] for i in permutation]
        layout = build_layout_once(order, params.max_degree, params.eps)
        logger.debug("rszd iteration %d: %d zones", iteration, len(layout.zones))
        if best is None or len(layout.zones) < len(best.zones):
            best = layout
            best_iteration = iteration

    logger.info(
        "rszd %s: %d circles -> %d zones (best iteration %d of %d)",
        instance.name,
        len(circles),
        len(best.zones),
        best_iteration,
        params.n_iter,
    )
    return replace(
        best,
        source_instance=instance.name,
        seed=seed,
        iterations_used=params.n_iter,
    )
