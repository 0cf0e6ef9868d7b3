"""
Instance and solution data model.

Text format (UTF-8, '#' starts a comment)::

    CEOPINST 1
    NAME bubbles1
    KIND CEOP
    BESTKNOWN 349.13
    BUDGET_LEVEL 0.9
    DEPOT_START 0 0
    DEPOT_END 0 0
    NODES 2
    1 0 0 1 5
    2 5 0 1 7

TDDP instances add ``TDDP <v_drone> <v_truck> <t_serv_hours> <n_drones>
<lambda_min> <lambda_max>`` and a sixth node column with the circle's flight
efficiency.
"""

import io
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import models

from .exceptions import DegenerateExtent, ParseError
from .geometry import EPS, CircleGeom, Point, distance

logger = logging.getLogger(__name__)

MAGIC = "CEOPINST"
FORMAT_VERSION = "1"


class Kind(models.TextChoices):
    CEOP = "CEOP", "Close enough orienteering"
    TDDP = "TDDP", "Truck and drone delivery"


@dataclass(frozen=True)
class TargetCircle:
    id: int
    geom: CircleGeom
    prize: float
    # flight efficiency of the drone serving this customer (TDDP only)
    efficiency: float | None = None

    @property
    def center(self):
        return self.geom.center

    @property
    def radius(self):
        return self.geom.radius


@dataclass(frozen=True)
class TddpParams:
    v_drone: float
    v_truck: float
    t_serv: float
    n_drones: int
    lambda_min: float
    lambda_max: float

    @classmethod
    def from_settings(cls, **overrides):
        defaults = settings.CRASZE["TDDP"]
        values = {
            "v_drone": defaults["V_DRONE"],
            "v_truck": defaults["V_TRUCK"],
            "t_serv": defaults["T_SERV"],
            "n_drones": defaults["N_DRONES"],
            "lambda_min": defaults["LAMBDA_MIN"],
            "lambda_max": defaults["LAMBDA_MAX"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str
    depot_start: Point
    depot_end: Point
    circles: tuple[TargetCircle, ...]
    budget: float
    best_known_cost: float | None = None
    budget_level: float | None = None
    tddp: TddpParams | None = None

    @property
    def radius(self):
        return self.circles[0].radius

    @property
    def is_tddp(self):
        return self.kind == Kind.TDDP

    @property
    def depot_leg_cost(self):
        """Cost of driving straight from depot to depot, in budget units"""
        leg = distance(self.depot_start, self.depot_end)
        if self.is_tddp:
            return leg / self.tddp.v_truck
        return leg

    def circle_map(self):
        return {c.id: c for c in self.circles}

    def with_budget_level(self, level):
        if self.best_known_cost is None:
            raise ValidationError(
                f"instance {self.name} has no BESTKNOWN cost to scale",
                code="missing_best_known",
            )
        updated = replace(
            self,
            budget_level=level,
            budget=derive_budget(self.kind, self.best_known_cost, level, self.tddp),
        )
        validate_instance(updated)
        return updated

    def with_budget(self, budget):
        updated = replace(self, budget=budget, budget_level=None)
        validate_instance(updated)
        return updated


@dataclass(frozen=True)
class Waypoint:
    zone_id: int
    circle_ids: tuple[int, ...]
    point: Point

    @property
    def x(self):
        return self.point.x

    @property
    def y(self):
        return self.point.y


@dataclass(frozen=True)
class Solution:
    instance_name: str
    algorithm: str
    seed: int
    prize: float
    cost: float
    budget: float
    runtime_s: float = 0.0
    sequence: tuple[Waypoint, ...] = field(default_factory=tuple)
    truncated: bool = False

    @property
    def waypoints(self):
        return [w.point for w in self.sequence]

    def with_runtime(self, runtime_s):
        return replace(self, runtime_s=runtime_s)


# ---------------------------------
# Budgets, overlap, prizes
# ---------------------------------


def compute_budget(best_known, level):
    if best_known <= 0:
        raise ValueError("best-known cost must be positive")
    return best_known * level


def derive_budget(kind, best_known, level, tddp=None):
    """Budget from a best-known distance; TDDP budgets are hours of truck time"""
    budget = compute_budget(best_known, level)
    if kind == Kind.TDDP:
        return budget / tddp.v_truck
    return budget


def standard_budget_levels(kind):
    return tuple(settings.CRASZE["BUDGET_LEVELS"][kind])


def budget_sweep(instance):
    """The instance at every standard budget level of its kind that covers the depot leg"""
    swept = []
    for level in standard_budget_levels(instance.kind):
        try:
            swept.append(instance.with_budget_level(level))
        except ValidationError as exc:
            if exc.code != "budget_below_depot_leg":
                raise
            logger.warning("%s: budget level %s is below the depot leg, skipped", instance.name, level)
    if not swept:
        raise ValidationError(
            f"no standard budget level of {instance.name} covers the depot leg",
            code="budget_below_depot_leg",
        )
    return swept


def overlap_ratio(instance):
    xs = [instance.depot_start.x, instance.depot_end.x] + [c.center.x for c in instance.circles]
    ys = [instance.depot_start.y, instance.depot_end.y] + [c.center.y for c in instance.circles]
    extent = max(max(xs) - min(xs), max(ys) - min(ys))
    if extent <= 0:
        raise DegenerateExtent(f"all points of {instance.name} coincide")
    return instance.radius / extent


def normalize_prizes(instance, lo, hi):
    if not lo < hi:
        raise ValueError("normalization range must satisfy lo < hi")
    prizes = [c.prize for c in instance.circles]
    p_min, p_max = min(prizes), max(prizes)
    if p_max == p_min:
        mapped = [(lo + hi) / 2] * len(prizes)
    else:
        mapped = [lo + (hi - lo) * (p - p_min) / (p_max - p_min) for p in prizes]
    circles = tuple(replace(c, prize=p) for c, p in zip(instance.circles, mapped))
    return replace(instance, circles=circles)


# ---------------------------------
# Validation
# ---------------------------------


def _lambda_in_range(efficiency, params, eps=EPS):
    return params.lambda_min - eps <= efficiency <= params.lambda_max + eps


def validate_instance(instance, eps=EPS):
    """Raise ValidationError (code names the violated rule) for an unusable instance"""
    if not instance.circles:
        raise ValidationError("instance has no target circles", code="no_circles")

    ids = [c.id for c in instance.circles]
    if min(ids) < 1:
        raise ValidationError("circle ids must be >= 1", code="invalid_id")
    if len(set(ids)) != len(ids):
        raise ValidationError("circle ids must be unique", code="duplicate_id")

    for c in instance.circles:
        if c.prize < 0:
            raise ValidationError(f"circle {c.id} has a negative prize", code="negative_prize")

    radii = np.array([c.radius for c in instance.circles])
    if np.any(np.abs(radii - radii[0]) > eps):
        raise ValidationError(
            "all circles must share one radius", code="non_uniform_radius"
        )

    centers = np.array([[c.center.x, c.center.y] for c in instance.circles])
    gaps = np.hypot(
        centers[:, None, 0] - centers[None, :, 0],
        centers[:, None, 1] - centers[None, :, 1],
    )
    contains = gaps + radii[None, :] <= radii[:, None] + eps
    np.fill_diagonal(contains, False)
    if contains.any():
        outer, inner = np.argwhere(contains)[0]
        raise ValidationError(
            f"circle {ids[outer]} contains circle {ids[inner]}", code="contained_circle"
        )

    if not (instance.budget > 0):
        raise ValidationError("budget must be positive", code="nonpositive_budget")

    if instance.kind == Kind.TDDP:
        params = instance.tddp
        if params is None:
            raise ValidationError("TDDP instance lacks a TDDP header", code="missing_tddp")
        if params.v_drone <= 0 or params.v_truck <= 0 or params.t_serv < 0:
            raise ValidationError("TDDP speeds must be positive", code="invalid_tddp")
        if params.n_drones < 1 or not (0 < params.lambda_min <= params.lambda_max <= 1):
            raise ValidationError("invalid TDDP drone settings", code="invalid_tddp")
        for c in instance.circles:
            if c.efficiency is None:
                raise ValidationError(
                    f"circle {c.id} has no flight efficiency", code="missing_lambda"
                )
            if not (0 < c.efficiency <= 1) or not _lambda_in_range(c.efficiency, params):
                raise ValidationError(
                    f"circle {c.id} flight efficiency must be in "
                    f"[{params.lambda_min}, {params.lambda_max}]",
                    code="invalid_lambda",
                )
    elif instance.kind != Kind.CEOP:
        raise ValidationError(f"unknown kind {instance.kind}", code="invalid_kind")

    if instance.budget < instance.depot_leg_cost - eps:
        raise ValidationError(
            f"budget {instance.budget} is below the direct depot leg {instance.depot_leg_cost}",
            code="budget_below_depot_leg",
        )
    return instance


# ---------------------------------
# Parsing / serialization
# ---------------------------------


def _meaningful_lines(text):
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content


def _number(value, line, what, cast=float):
    try:
        number = cast(value)
    except ValueError:
        raise ParseError(line, f"{what} is not a number: {value!r}") from None
    if cast is float and not math.isfinite(number):
        raise ParseError(line, f"{what} must be finite")
    return number


def _numbers(parts, count, line, what):
    if len(parts) != count:
        raise ParseError(line, f"{what} expects {count} values, got {len(parts)}")
    return [_number(p, line, what) for p in parts]


def parse_instance(text):
    if hasattr(text, "read"):
        text = text.read()
    lines = list(_meaningful_lines(text))
    if not lines:
        raise ParseError(1, "empty instance")

    number, first = lines[0]
    if first.split() != [MAGIC, FORMAT_VERSION]:
        raise ParseError(number, f"expected '{MAGIC} {FORMAT_VERSION}'")

    header = {}
    header_lines = {}
    circles = []
    node_numbers = []
    cursor = 1
    while cursor < len(lines):
        number, content = lines[cursor]
        keyword, *rest = content.split(None, 1)
        rest = rest[0].strip() if rest else ""
        if keyword in header:
            raise ParseError(number, f"duplicate {keyword}")
        header_lines[keyword] = number

        if keyword == "NAME":
            header["NAME"] = rest
        elif keyword == "KIND":
            if rest not in Kind.values:
                raise ParseError(number, f"KIND must be one of {', '.join(Kind.values)}")
            header["KIND"] = rest
        elif keyword in ("BESTKNOWN", "BUDGET", "BUDGET_LEVEL"):
            header[keyword] = _number(rest, number, keyword)
        elif keyword in ("DEPOT_START", "DEPOT_END"):
            x, y = _numbers(rest.split(), 2, number, keyword)
            header[keyword] = Point(x, y)
        elif keyword == "TDDP":
            values = _numbers(rest.split(), 6, number, keyword)
            if values[3] != int(values[3]):
                raise ParseError(number, "TDDP drone count must be an integer")
            header["TDDP"] = TddpParams(
                v_drone=values[0],
                v_truck=values[1],
                t_serv=values[2],
                n_drones=int(values[3]),
                lambda_min=values[4],
                lambda_max=values[5],
            )
        elif keyword == "NODES":
            count = _number(rest, number, "NODES", cast=int)
            if count < 0:
                raise ParseError(number, "NODES count must be non-negative")
            header["NODES"] = count
            node_lines = lines[cursor + 1 : cursor + 1 + count]
            if len(node_lines) != count:
                raise ParseError(number, f"expected {count} node lines, found {len(node_lines)}")
            for node_number, node in node_lines:
                circles.append(_parse_node(node_number, node))
                node_numbers.append(node_number)
            cursor += count
        else:
            raise ParseError(number, f"unknown keyword {keyword}")
        cursor += 1

    last_line = lines[-1][0]
    for required in ("NAME", "KIND", "DEPOT_START", "DEPOT_END", "NODES"):
        if required not in header:
            raise ParseError(last_line, f"missing {required}")
    if ("BUDGET" in header) == ("BUDGET_LEVEL" in header):
        raise ParseError(last_line, "exactly one of BUDGET or BUDGET_LEVEL is required")

    kind = header["KIND"]
    tddp = header.get("TDDP")
    if tddp is not None:
        for node_number, c in zip(node_numbers, circles):
            if c.efficiency is not None and not _lambda_in_range(c.efficiency, tddp):
                raise ParseError(
                    node_number,
                    f"lambda {c.efficiency} of circle {c.id} is outside "
                    f"[{tddp.lambda_min}, {tddp.lambda_max}]",
                )
    best_known = header.get("BESTKNOWN")
    level = header.get("BUDGET_LEVEL")
    if level is not None:
        if best_known is None:
            raise ParseError(header_lines["BUDGET_LEVEL"], "BUDGET_LEVEL requires BESTKNOWN")
        if best_known <= 0:
            raise ValidationError("BESTKNOWN must be positive", code="nonpositive_budget")
        if kind == Kind.TDDP and tddp is None:
            raise ValidationError("TDDP instance lacks a TDDP header", code="missing_tddp")
        budget = derive_budget(kind, best_known, level, tddp)
    else:
        budget = header["BUDGET"]

    instance = Instance(
        name=header["NAME"],
        kind=kind,
        depot_start=header["DEPOT_START"],
        depot_end=header["DEPOT_END"],
        circles=tuple(circles),
        budget=budget,
        best_known_cost=best_known,
        budget_level=level,
        tddp=tddp,
    )
    validate_instance(instance)
    logger.debug("parsed instance %s with %d circles", instance.name, len(circles))
    return instance


def _parse_node(number, content):
    parts = content.split()
    if len(parts) not in (5, 6):
        raise ParseError(number, f"node line expects 5 or 6 values, got {len(parts)}")
    node_id = _number(parts[0], number, "node id", cast=int)
    x, y, radius, prize = (_number(p, number, "node field") for p in parts[1:5])
    efficiency = _number(parts[5], number, "lambda") if len(parts) == 6 else None
    if radius <= 0:
        raise ValidationError(f"circle {node_id} radius must be positive", code="nonpositive_radius")
    return TargetCircle(
        id=node_id,
        geom=CircleGeom(Point(x, y), radius),
        prize=prize,
        efficiency=efficiency,
    )


def serialize_instance(instance):
    out = io.StringIO()
    out.write(f"{MAGIC} {FORMAT_VERSION}\n")
    out.write(f"NAME {instance.name}\n")
    out.write(f"KIND {instance.kind}\n")
    if instance.best_known_cost is not None:
        out.write(f"BESTKNOWN {instance.best_known_cost!r}\n")
    if instance.budget_level is not None:
        out.write(f"BUDGET_LEVEL {instance.budget_level!r}\n")
    else:
        out.write(f"BUDGET {instance.budget!r}\n")
    out.write(f"DEPOT_START {instance.depot_start.x!r} {instance.depot_start.y!r}\n")
    out.write(f"DEPOT_END {instance.depot_end.x!r} {instance.depot_end.y!r}\n")
    if instance.tddp is not None:
        t = instance.tddp
        out.write(
            f"TDDP {t.v_drone!r} {t.v_truck!r} {t.t_serv!r} {t.n_drones} "
            f"{t.lambda_min!r} {t.lambda_max!r}\n"
        )
    out.write(f"NODES {len(instance.circles)}\n")
    for c in instance.circles:
        row = f"{c.id} {c.center.x!r} {c.center.y!r} {c.radius!r} {c.prize!r}"
        if c.efficiency is not None:
            row += f" {c.efficiency!r}"
        out.write(row + "\n")
    return out.getvalue()


def load_instance(path):
    with open(path, encoding="utf-8") as handle:
        return parse_instance(handle)
