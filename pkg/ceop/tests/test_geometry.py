import math

import numpy as np
from django.test import SimpleTestCase

from ceop.exceptions import DegenerateCircles
from ceop.geometry import (
    Chord,
    CircleGeom,
    Disjoint,
    Point,
    Tangent,
    circle_intersections,
    closest_point_on_circle_to_segment,
    distance,
    point_in_circle,
    project_point_to_segment,
    segment_circle_relation,
    segment_distance,
)

UNIT = CircleGeom(Point(0.0, 0.0), 1.0)


class CircleIntersectionTests(SimpleTestCase):

    # ---------------------------------
    # Worked cases
    # ---------------------------------
    def test_overlapping_unit_circles(self):
        """Unit circles one apart meet at (0.5, +-sqrt(3)/2)"""
        points = circle_intersections(UNIT, CircleGeom(Point(1.0, 0.0), 1.0))

        self.assertEqual(len(points), 2)
        ys = sorted(p.y for p in points)
        self.assertAlmostEqual(ys[0], -math.sqrt(3) / 2, places=12)
        self.assertAlmostEqual(ys[1], math.sqrt(3) / 2, places=12)
        for p in points:
            self.assertAlmostEqual(p.x, 0.5, places=12)

    def test_disjoint_circles(self):
        self.assertEqual(circle_intersections(UNIT, CircleGeom(Point(3.0, 0.0), 1.0)), [])

    def test_external_tangency_gives_one_point(self):
        points = circle_intersections(UNIT, CircleGeom(Point(2.0, 0.0), 1.0))

        self.assertEqual(len(points), 1)
        self.assertAlmostEqual(points[0].x, 1.0, places=12)
        self.assertAlmostEqual(points[0].y, 0.0, places=12)

    def test_internal_tangency_gives_one_point(self):
        points = circle_intersections(CircleGeom(Point(0.0, 0.0), 2.0), CircleGeom(Point(1.0, 0.0), 1.0))

        self.assertEqual(len(points), 1)
        self.assertAlmostEqual(points[0].x, 2.0, places=12)

    def test_coincident_circles_are_rejected(self):
        with self.assertRaises(DegenerateCircles):
            circle_intersections(UNIT, CircleGeom(Point(0.0, 0.0), 1.0))

    # ---------------------------------
    # Randomized property
    # ---------------------------------
    def test_points_lie_on_both_boundaries(self):
        """Every returned point is on both circles within 1e-8"""
        rng = np.random.default_rng(11)
        checked = 0
        for _ in range(2000):
            a = CircleGeom(Point(*rng.uniform(-10, 10, 2)), float(rng.uniform(0.5, 5)))
            b = CircleGeom(Point(*rng.uniform(-10, 10, 2)), float(rng.uniform(0.5, 5)))
            for p in circle_intersections(a, b):
                self.assertLessEqual(abs(distance(p, a.center) - a.radius), 1e-8)
                self.assertLessEqual(abs(distance(p, b.center) - b.radius), 1e-8)
                checked += 1
        self.assertGreater(checked, 100)


class PointAndSegmentTests(SimpleTestCase):

    def test_point_in_circle(self):
        """Center and boundary are inside, (1.1, 0) is not"""
        self.assertTrue(point_in_circle(Point(0.0, 0.0), UNIT))
        self.assertTrue(point_in_circle(Point(1.0, 0.0), UNIT, 1e-9))
        self.assertFalse(point_in_circle(Point(1.1, 0.0), UNIT))

    def test_projection_foot_inside_segment(self):
        foot = project_point_to_segment(Point(0.0, 5.0), Point(-1.0, 0.0), Point(1.0, 0.0))
        self.assertEqual(foot, Point(0.0, 0.0))

    def test_projection_clamped_to_endpoint(self):
        foot = project_point_to_segment(Point(5.0, 5.0), Point(-1.0, 0.0), Point(1.0, 0.0))
        self.assertEqual(foot, Point(1.0, 0.0))

    def test_projection_on_degenerate_segment(self):
        foot = project_point_to_segment(Point(3.0, 3.0), Point(2.0, 2.0), Point(2.0, 2.0))
        self.assertEqual(foot, Point(2.0, 2.0))

    def test_projection_stays_on_segment(self):
        """Random projections are a + t(b - a) with t in [0, 1]"""
        rng = np.random.default_rng(3)
        for _ in range(500):
            p, a, b = (Point(*rng.uniform(-5, 5, 2)) for _ in range(3))
            q = project_point_to_segment(p, a, b)
            self.assertLessEqual(segment_distance(q, a, b), 1e-9)


class SegmentCircleRelationTests(SimpleTestCase):

    def test_diameter_is_a_chord(self):
        relation = segment_circle_relation(Point(-2.0, 0.0), Point(2.0, 0.0), UNIT)

        self.assertIsInstance(relation, Chord)
        self.assertAlmostEqual(relation.first.x, -1.0, places=12)
        self.assertAlmostEqual(relation.second.x, 1.0, places=12)

    def test_tangent_line(self):
        relation = segment_circle_relation(Point(-2.0, 1.0), Point(2.0, 1.0), UNIT)

        self.assertIsInstance(relation, Tangent)
        self.assertAlmostEqual(relation.point.x, 0.0, places=12)
        self.assertAlmostEqual(relation.point.y, 1.0, places=12)

    def test_disjoint_line(self):
        relation = segment_circle_relation(Point(-2.0, 3.0), Point(2.0, 3.0), UNIT)
        self.assertIsInstance(relation, Disjoint)

    def test_relation_symmetric_under_reversal(self):
        """Swapping the endpoints only swaps the chord points"""
        rng = np.random.default_rng(5)
        for _ in range(300):
            a, b = Point(*rng.uniform(-3, 3, 2)), Point(*rng.uniform(-3, 3, 2))
            forward = segment_circle_relation(a, b, UNIT)
            backward = segment_circle_relation(b, a, UNIT)
            self.assertIs(type(forward), type(backward))
            if isinstance(forward, Chord):
                self.assertLessEqual(distance(forward.first, backward.second), 1e-9)
                self.assertLessEqual(distance(forward.second, backward.first), 1e-9)


class ClosestBoundaryPointTests(SimpleTestCase):

    def test_vertical_drop(self):
        p = closest_point_on_circle_to_segment(
            CircleGeom(Point(0.0, 3.0), 1.0), Point(-1.0, 0.0), Point(1.0, 0.0)
        )
        self.assertAlmostEqual(p.x, 0.0, places=12)
        self.assertAlmostEqual(p.y, 2.0, places=12)

    def test_collinear_circle(self):
        p = closest_point_on_circle_to_segment(
            CircleGeom(Point(5.0, 0.0), 1.0), Point(-1.0, 0.0), Point(1.0, 0.0)
        )
        self.assertAlmostEqual(p.x, 4.0, places=12)
        self.assertAlmostEqual(p.y, 0.0, places=12)

    def test_point_segment(self):
        p = closest_point_on_circle_to_segment(
            CircleGeom(Point(0.0, 0.0), 2.0), Point(10.0, 10.0), Point(10.0, 10.0)
        )
        self.assertAlmostEqual(p.x, math.sqrt(2), places=12)
        self.assertAlmostEqual(p.y, math.sqrt(2), places=12)

    def test_segment_through_center_uses_documented_tie_break(self):
        p = closest_point_on_circle_to_segment(UNIT, Point(-1.0, 0.0), Point(1.0, 0.0))
        self.assertEqual(p, Point(1.0, 0.0))

    def test_beats_boundary_sweep(self):
        """No point of a 360-sample boundary sweep is nearer to the segment"""
        rng = np.random.default_rng(8)
        thetas = np.linspace(0, 2 * math.pi, 360, endpoint=False)
        for _ in range(300):
            c = CircleGeom(Point(*rng.uniform(-2, 2, 2)), float(rng.uniform(0.5, 2)))
            a, b = Point(*rng.uniform(4, 9, 2)), Point(*rng.uniform(4, 9, 2))
            p = closest_point_on_circle_to_segment(c, a, b)
            self.assertLessEqual(abs(distance(p, c.center) - c.radius), 1e-8)
            best = segment_distance(p, a, b)
            for theta in thetas:
                self.assertGreaterEqual(segment_distance(c.point_at(theta), a, b), best - 1e-8)
