"""
Planar primitives shared by every solver module.

All predicates take an explicit tolerance; ``EPS`` (instance units) is the
default used throughout the suite.
"""

import math
from dataclasses import dataclass

from .exceptions import DegenerateCircles

EPS = 1e-9


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __add__(self, other):
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, factor):
        return Point(self.x * factor, self.y * factor)

    def norm(self):
        return math.hypot(self.x, self.y)

    def distance_to(self, other):
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_list(self):
        return [self.x, self.y]


@dataclass(frozen=True, slots=True)
class CircleGeom:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"circle radius must be positive and finite, got {self.radius}")

    def point_at(self, theta):
        return Point(
            self.center.x + self.radius * math.cos(theta),
            self.center.y + self.radius * math.sin(theta),
        )

    def angle_of(self, p):
        return math.atan2(p.y - self.center.y, p.x - self.center.x)


# Segment/circle relationship variants


@dataclass(frozen=True, slots=True)
class Disjoint:
    pass


@dataclass(frozen=True, slots=True)
class Tangent:
    point: Point


@dataclass(frozen=True, slots=True)
class Chord:
    first: Point
    second: Point

    @property
    def midpoint(self):
        return Point((self.first.x + self.second.x) / 2, (self.first.y + self.second.y) / 2)


SegmentCircleRelation = Disjoint | Tangent | Chord


def distance(p, q):
    return math.hypot(p.x - q.x, p.y - q.y)


def detour(prev, p, nxt):
    """Length of prev -> p -> nxt"""
    return distance(prev, p) + distance(p, nxt)


def circle_intersections(a, b, eps=EPS):
    """Intersection points of two circle boundaries.

    Tangency (external or internal) yields one point. Two points are ordered
    with the one left of the a->b center line first.
    """
    d = distance(a.center, b.center)
    if d <= eps and abs(a.radius - b.radius) <= eps:
        raise DegenerateCircles(f"circles at {a.center} coincide")
    if d <= eps:
        return []

    ux = (b.center.x - a.center.x) / d
    uy = (b.center.y - a.center.y) / d

    if abs(d - (a.radius + b.radius)) <= eps:
        return [Point(a.center.x + a.radius * ux, a.center.y + a.radius * uy)]
    if abs(d - abs(a.radius - b.radius)) <= eps:
        # internal tangency: the touching point lies on the side of the larger circle's rim
        sign = 1.0 if a.radius > b.radius else -1.0
        return [Point(a.center.x + sign * a.radius * ux, a.center.y + sign * a.radius * uy)]
    if d > a.radius + b.radius or d < abs(a.radius - b.radius):
        return []

    along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2 * d)
    h = math.sqrt(max(a.radius * a.radius - along * along, 0.0))
    mx = a.center.x + along * ux
    my = a.center.y + along * uy
    return [
        Point(mx - h * uy, my + h * ux),
        Point(mx + h * uy, my - h * ux),
    ]


def point_in_circle(p, c, eps=EPS):
    return distance(p, c.center) <= c.radius + eps


def segment_parameter(p, a, b):
    """Clamped parameter t of the projection of p on segment a-b"""
    dx = b.x - a.x
    dy = b.y - a.y
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        return 0.0
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / length_sq
    return min(1.0, max(0.0, t))


def point_along(a, b, t):
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def project_point_to_segment(p, a, b):
    return point_along(a, b, segment_parameter(p, a, b))


def segment_distance(p, a, b):
    return distance(p, project_point_to_segment(p, a, b))


def line_circle_parameters(a, b, c):
    """Parameters t1 <= t2 where the line a + t(b - a) crosses the circle, or None.

    The segment must have non-zero length.
    """
    dx = b.x - a.x
    dy = b.y - a.y
    fx = a.x - c.center.x
    fy = a.y - c.center.y
    qa = dx * dx + dy * dy
    qb = 2 * (fx * dx + fy * dy)
    qc = fx * fx + fy * fy - c.radius * c.radius
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return None
    root = math.sqrt(disc)
    return (-qb - root) / (2 * qa), (-qb + root) / (2 * qa)


def segment_inside_interval(a, b, c, eps=EPS):
    """Sub-interval [t_lo, t_hi] of [0, 1] whose segment points lie in the closed disk"""
    if distance(a, b) <= eps:
        return (0.0, 1.0) if point_in_circle(a, c, eps) else None
    roots = line_circle_parameters(a, b, c)
    if roots is None:
        # the line may still graze the circle within eps
        foot = segment_parameter(c.center, a, b)
        if point_in_circle(point_along(a, b, foot), c, eps):
            return foot, foot
        return None
    lo = max(0.0, roots[0])
    hi = min(1.0, roots[1])
    if lo > hi:
        return None
    return lo, hi


def segment_circle_relation(a, b, c, eps=EPS):
    length = distance(a, b)
    if length <= eps:
        if abs(distance(a, c.center) - c.radius) <= eps:
            return Tangent(a)
        return Disjoint()

    foot_t = ((c.center.x - a.x) * (b.x - a.x) + (c.center.y - a.y) * (b.y - a.y)) / (length * length)
    foot = point_along(a, b, foot_t)
    gap = distance(foot, c.center)
    t_tol = eps / length

    if abs(gap - c.radius) <= eps:
        if -t_tol <= foot_t <= 1 + t_tol:
            return Tangent(foot)
        return Disjoint()
    if gap > c.radius:
        return Disjoint()

    t1, t2 = line_circle_parameters(a, b, c)
    hits = [t for t in (t1, t2) if -t_tol <= t <= 1 + t_tol]
    points = [point_along(a, b, min(1.0, max(0.0, t))) for t in hits]
    if len(points) == 2:
        return Chord(points[0], points[1])
    if len(points) == 1:
        return Tangent(points[0])
    return Disjoint()


def closest_point_on_circle_to_segment(c, a, b, eps=EPS):
    """Boundary point of c nearest to segment a-b (segment assumed outside the disk).

    When the projection of the center lands on the center itself every boundary
    point is equally near; center + (r, 0) is returned.
    """
    q = project_point_to_segment(c.center, a, b)
    gap = distance(q, c.center)
    if gap <= eps:
        return Point(c.center.x + c.radius, c.center.y)
    scale = c.radius / gap
    return Point(
        c.center.x + (q.x - c.center.x) * scale,
        c.center.y + (q.y - c.center.y) * scale,
    )
