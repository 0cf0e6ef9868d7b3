"""
Random instance generator.

Circle centers are uniform in an ``extent x extent`` square whose opposite
corners hold the depots, so the bounding box of all nodes is exactly the
square and the overlap ratio is ``radius / extent``. The best-known reference
cost is a nearest-neighbour route through every circle center polished by
2-opt.
"""

import logging
import math

import numpy as np
from django.conf import settings

from .acs import SopGraph, nearest_neighbor_path, two_opt
from .geometry import CircleGeom, Point
from .instances import (
    Instance,
    Kind,
    TargetCircle,
    TddpParams,
    derive_budget,
    normalize_prizes,
    validate_instance,
)

logger = logging.getLogger(__name__)

# closest two centers may sit; coincident equal circles contain each other
MIN_CENTER_GAP = 1e-6


def radius_for(extent, radius=None, overlap_ratio=None, kind=Kind.CEOP):
    """Uniform radius from exactly one source; TDDP falls back to the drone range"""
    if radius is None and overlap_ratio is None and kind == Kind.TDDP:
        radius = settings.CRASZE["TDDP"]["R_DRONE"]
    if (radius is None) == (overlap_ratio is None):
        raise ValueError("give exactly one of radius or overlap ratio")
    if extent <= 0:
        raise ValueError("extent must be positive")
    if overlap_ratio is not None:
        if overlap_ratio <= 0:
            raise ValueError("overlap ratio must be positive")
        return overlap_ratio * extent
    if radius <= 0:
        raise ValueError("radius must be positive")
    return radius


def _centers(n, extent, rng):
    centers = rng.uniform(0.0, extent, size=(n, 2))
    while True:
        gaps = np.hypot(
            centers[:, None, 0] - centers[None, :, 0],
            centers[:, None, 1] - centers[None, :, 1],
        )
        np.fill_diagonal(gaps, math.inf)
        clash = np.flatnonzero((gaps <= MIN_CENTER_GAP).any(axis=1))
        if clash.size == 0:
            return centers
        centers[clash[0]] = rng.uniform(0.0, extent, size=2)


def reference_route_cost(depot_start, depot_end, points):
    """Length of a nearest-neighbour + 2-opt path visiting every point"""
    graph = SopGraph(
        name="reference",
        depot_start=depot_start,
        depot_end=depot_end,
        vertices=[(p, k) for k, p in enumerate(points, start=1)],
        zone_prizes={k: 1.0 for k in range(1, len(points) + 1)},
        budget=math.inf,
    )
    path = nearest_neighbor_path(graph)
    return two_opt(graph, path, eps_impr=1e-9).cost


def generate_instance(
    n,
    radius=None,
    overlap_ratio=None,
    extent=None,
    prize_range=None,
    kind=Kind.CEOP,
    seed=0,
    budget_level=None,
    name=None,
):
    if n < 1:
        raise ValueError("at least one circle is required")
    config = settings.CRASZE["GENERATOR"]
    extent = config["EXTENT"] if extent is None else extent
    prize_lo, prize_hi = config["PRIZE_RANGE"] if prize_range is None else prize_range
    if prize_lo < 0 or prize_lo > prize_hi:
        raise ValueError("prize range must satisfy 0 <= low <= high")
    budget_level = config["BUDGET_LEVEL"] if budget_level is None else budget_level
    if kind not in Kind.values:
        raise ValueError(f"unknown kind {kind}")
    r = radius_for(extent, radius, overlap_ratio, kind)

    rng = np.random.default_rng(seed)
    centers = _centers(n, extent, rng)
    prizes = rng.integers(math.ceil(prize_lo), math.floor(prize_hi) + 1, size=n)
    tddp = TddpParams.from_settings() if kind == Kind.TDDP else None
    if tddp is not None:
        efficiencies = rng.uniform(tddp.lambda_min, tddp.lambda_max, size=n)
    else:
        efficiencies = [None] * n

    circles = tuple(
        TargetCircle(
            id=k,
            geom=CircleGeom(Point(float(x), float(y)), r),
            prize=float(prize),
            efficiency=None if lam is None else float(lam),
        )
        for k, ((x, y), prize, lam) in enumerate(zip(centers, prizes, efficiencies), start=1)
    )
    depot_start = Point(0.0, 0.0)
    depot_end = Point(float(extent), float(extent))
    best_known = reference_route_cost(depot_start, depot_end, [c.center for c in circles])

    instance = Instance(
        name=name or f"rand{n}-{seed}",
        kind=kind,
        depot_start=depot_start,
        depot_end=depot_end,
        circles=circles,
        budget=derive_budget(kind, best_known, budget_level, tddp),
        best_known_cost=best_known,
        budget_level=budget_level,
        tddp=tddp,
    )
    if tddp is not None:
        instance = normalize_prizes(instance, *settings.CRASZE["TDDP"]["PRIZE_RANGE"])
    validate_instance(instance)
    logger.info(
        "generated %s: %d circles, radius %.4f, best known %.4f",
        instance.name,
        n,
        r,
        best_known,
    )
    return instance
