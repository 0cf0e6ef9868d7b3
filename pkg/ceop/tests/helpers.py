from django.conf import settings
from django.test import override_settings

from ceop.geometry import CircleGeom, Point
from ceop.instances import Instance, Kind, TargetCircle
from ceop.rszd import singleton_zone, try_add_circle


def circle(circle_id, x, y, r=1.0, prize=1.0, efficiency=None):
    return TargetCircle(
        id=circle_id,
        geom=CircleGeom(Point(x, y), r),
        prize=prize,
        efficiency=efficiency,
    )


def zone_of(*circles, zone_id=1):
    """Zone grown from the given circles in order; fails loudly if one is rejected"""
    zone = singleton_zone(zone_id, circles[0])
    for c in circles[1:]:
        zone = try_add_circle(zone, c)
        if zone is None:
            raise AssertionError(f"circle {c.id} was rejected")
    return zone


def make_instance(circles, budget, depot_start=(0.0, 0.0), depot_end=(0.0, 0.0), name="toy"):
    return Instance(
        name=name,
        kind=Kind.CEOP,
        depot_start=Point(*depot_start),
        depot_end=Point(*depot_end),
        circles=tuple(circles),
        budget=budget,
    )


def lens():
    return zone_of(circle(1, 0.0, 0.0), circle(2, 1.0, 0.0))


def triple():
    """Three unit circles sharing a three-arc region"""
    return zone_of(circle(1, 0.0, 0.0), circle(2, 1.0, 0.0), circle(3, 0.5, 0.8))


TOY_INSTANCE = """\
CEOPINST 1
NAME pair
KIND CEOP
BUDGET 10
DEPOT_START 0 0
DEPOT_END 5 0
NODES 2
1 0 0 1 3
2 5 0 1 4
"""


def crasze(section, **values):
    """override_settings for a few keys of one CRASZE section"""
    config = {**settings.CRASZE, section: {**settings.CRASZE[section], **values}}
    return override_settings(CRASZE=config)
