import math

import numpy as np
from django.test import SimpleTestCase

from ceop.acs import AcsParams, SopGraph, solve_sop
from ceop.arc_search import (
    ArcSearchParams,
    Stop,
    arc_search,
    best_waypoint_in_zone,
    feasible_arcs,
    refine_ceop,
    stops_cost,
)
from ceop.generator import generate_instance
from ceop.geometry import Point, detour, distance, point_in_circle
from ceop.oracle import sampled_best_waypoint
from ceop.rszd import RszdParams, rszd, singleton_zone

from .helpers import circle, lens, triple

FAST = AcsParams(n_ants=10, n_iter=40, max_no_impr=10)


def inside(zone, p, tol=1e-8):
    return all(point_in_circle(p, c, tol) for c in zone.circles)


class FeasibleArcTests(SimpleTestCase):

    def test_singleton_arc_is_whole_circle(self):
        arcs = feasible_arcs(singleton_zone(1, circle(1, 0, 0)))

        self.assertEqual(len(arcs), 1)
        lo, hi = arcs[0].intervals[0]
        self.assertAlmostEqual(hi - lo, 2 * math.pi)

    def test_arc_samples_lie_in_other_members(self):
        for zone in (lens(), triple()):
            arcs = feasible_arcs(zone)
            self.assertEqual(len(arcs), zone.degree)
            for arc in arcs:
                for p in arc.sample(50):
                    self.assertTrue(inside(zone, p))

    def test_lens_arcs_are_one_third_turns(self):
        """Unit circles one apart bound the lens with 120 degree arcs"""
        for arc in feasible_arcs(lens()):
            span = sum(hi - lo for lo, hi in arc.intervals)
            self.assertAlmostEqual(span, 2 * math.pi / 3, places=9)


class BestWaypointTests(SimpleTestCase):

    # ---------------------------------
    # Worked cases
    # ---------------------------------
    def test_projection_case(self):
        zone = singleton_zone(1, circle(1, 0, 3))
        p = best_waypoint_in_zone(Point(-5, 0), Point(5, 0), zone)

        self.assertAlmostEqual(p.x, 0.0, places=9)
        self.assertAlmostEqual(p.y, 2.0, places=9)

    def test_chord_midpoint(self):
        zone = singleton_zone(1, circle(1, 0, 0))
        p = best_waypoint_in_zone(Point(-5, 0), Point(5, 0), zone)

        self.assertAlmostEqual(p.x, 0.0, places=12)
        self.assertAlmostEqual(p.y, 0.0, places=12)

    def test_coincident_neighbours(self):
        """prev == next falls back to the zone point nearest that point"""
        zone = singleton_zone(1, circle(1, 0, 0))
        p = best_waypoint_in_zone(Point(4, 0), Point(4, 0), zone)

        self.assertAlmostEqual(p.x, 1.0, places=6)
        self.assertAlmostEqual(p.y, 0.0, places=6)

    # ---------------------------------
    # Against dense sampling
    # ---------------------------------
    def test_degree_one_matches_disk_sampling(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            zone = singleton_zone(1, circle(1, *rng.uniform(-2, 2, 2), r=float(rng.uniform(0.5, 2))))
            prev = Point(*rng.uniform(-8, 8, 2))
            nxt = Point(*rng.uniform(-8, 8, 2))

            p = best_waypoint_in_zone(prev, nxt, zone)
            _, sampled = sampled_best_waypoint(prev, nxt, zone, n_boundary=720, n_grid=60)

            self.assertTrue(inside(zone, p))
            self.assertLessEqual(detour(prev, p, nxt), sampled + 1e-6)

    def test_degree_three_zone_battery(self):
        zone = triple()
        rng = np.random.default_rng(4)
        for _ in range(60):
            angle_a, angle_b = rng.uniform(0, 2 * math.pi, 2)
            prev = Point(4 * math.cos(angle_a), 4 * math.sin(angle_a))
            nxt = Point(4 * math.cos(angle_b), 4 * math.sin(angle_b))

            p = best_waypoint_in_zone(prev, nxt, zone)
            _, sampled = sampled_best_waypoint(prev, nxt, zone)

            self.assertTrue(inside(zone, p))
            self.assertLessEqual(detour(prev, p, nxt), sampled + 1e-6)


class ArcSearchTests(SimpleTestCase):

    def test_single_stop_converges(self):
        zone = singleton_zone(1, circle(1, 0, 3))
        stops = arc_search([Stop(zone, zone.center)], Point(-5, 0), Point(5, 0))

        self.assertAlmostEqual(stops[0].point.y, 2.0, places=9)

    def test_cost_never_increases(self):
        instance = generate_instance(40, overlap_ratio=0.06, seed=3)
        layout = rszd(instance, RszdParams.from_settings(instance), 3)
        rng = np.random.default_rng(3)
        for _ in range(5):
            order = rng.permutation(len(layout.zones))[:12]
            stops = [Stop(layout.zones[k], layout.zones[k].center) for k in order]
            before = stops_cost(stops, instance.depot_start, instance.depot_end)

            after = arc_search(stops, instance.depot_start, instance.depot_end)

            self.assertLessEqual(
                stops_cost(after, instance.depot_start, instance.depot_end), before + 1e-9
            )
            for stop in after:
                self.assertTrue(inside(stop.zone, stop.point))


class RefineCeopTests(SimpleTestCase):

    def setUp(self):
        self.cases = []
        for seed in range(3):
            instance = generate_instance(35, overlap_ratio=0.05, seed=seed, budget_level=1.0)
            budget = instance.depot_leg_cost + 0.4 * (
                instance.best_known_cost - instance.depot_leg_cost
            )
            instance = instance.with_budget(budget)
            layout = rszd(instance, RszdParams.from_settings(instance), seed)
            graph = SopGraph.from_layout(layout, instance)
            self.cases.append((layout, graph, solve_sop(graph, FAST, seed)))

    def test_prize_monotone_and_budget_feasible(self):
        for layout, graph, solution in self.cases:
            refined = refine_ceop(solution, layout, graph, ArcSearchParams())
            zones = layout.zone_map()

            self.assertGreaterEqual(refined.prize, solution.prize - 1e-9)
            self.assertLessEqual(refined.cost, graph.budget + 1e-9)
            for w in refined.sequence:
                self.assertTrue(inside(zones[w.zone_id], w.point))
            points = [graph.points[graph.start]] + refined.waypoints + [graph.points[graph.end]]
            replay = sum(distance(a, b) for a, b in zip(points, points[1:]))
            self.assertAlmostEqual(refined.cost, replay, delta=1e-6)

    def test_refining_again_keeps_prize_and_budget(self):
        layout, graph, solution = self.cases[0]
        once = refine_ceop(solution, layout, graph)
        twice = refine_ceop(once, layout, graph)

        self.assertGreaterEqual(twice.prize, once.prize - 1e-9)
        self.assertLessEqual(twice.cost, graph.budget + 1e-9)
