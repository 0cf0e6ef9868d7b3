import math
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from ceop.acs import AcsParams, SopGraph, solve_sop
from ceop.exceptions import TooLarge
from ceop.generator import generate_instance
from ceop.geometry import Point
from ceop.oracle import brute_force_sop, monte_carlo_zone_check, sampled_best_waypoint
from ceop.rszd import RszdParams, rszd, singleton_zone

from .helpers import circle, crasze, lens, triple


def small_graph(seed, n=7, level=0.5):
    instance = generate_instance(n, radius=5.0, seed=seed, budget_level=1.0)
    instance = instance.with_budget(
        instance.depot_leg_cost + level * (instance.best_known_cost - instance.depot_leg_cost)
    )
    layout = rszd(instance, RszdParams.from_settings(instance), seed)
    return SopGraph.from_layout(layout, instance)


def single_zone_graph(budget):
    return SopGraph(
        name="one",
        depot_start=Point(0, 0),
        depot_end=Point(10, 0),
        vertices=[(Point(5, 5), 1)],
        zone_prizes={1: 3.0},
        budget=budget,
    )


class BruteForceTests(SimpleTestCase):

    def test_single_reachable_zone(self):
        search = brute_force_sop(single_zone_graph(20))

        self.assertEqual(search.best_prize, 3.0)
        self.assertEqual(search.best_nodes, [1])
        self.assertAlmostEqual(search.best_cost, 2 * math.sqrt(50))

    def test_depot_leg_budget_visits_nothing(self):
        search = brute_force_sop(single_zone_graph(10))

        self.assertEqual(search.best_prize, 0.0)
        self.assertEqual(search.best_nodes, [])
        self.assertAlmostEqual(search.best_cost, 10.0)

    def test_budget_override(self):
        self.assertEqual(brute_force_sop(single_zone_graph(10), budget=20).best_prize, 3.0)

    def test_guard_refuses_large_graphs(self):
        graph = small_graph(seed=0, n=12)
        with self.assertRaises(TooLarge) as cm:
            brute_force_sop(graph, max_zones=3)
        self.assertEqual(cm.exception.limit, 3)

    def test_pruning_keeps_the_optimum(self):
        for seed in range(4):
            graph = small_graph(seed, n=6)
            pruned = brute_force_sop(graph)
            full = brute_force_sop(graph, prune=False)

            self.assertAlmostEqual(pruned.best_prize, full.best_prize)
            self.assertLessEqual(pruned.nodes_expanded, full.nodes_expanded)

    def test_colony_against_exact_optimum(self):
        """The colony never beats the optimum and matches it on nearly every case"""
        params = AcsParams(n_ants=20, n_iter=60, max_no_impr=20)
        matches = 0
        for seed in range(10):
            graph = small_graph(seed)
            exact = brute_force_sop(graph)
            solution = solve_sop(graph, params, seed)

            self.assertLessEqual(solution.prize, exact.best_prize + 1e-9)
            matches += abs(solution.prize - exact.best_prize) <= 1e-9
        self.assertGreaterEqual(matches, 8)


class ZoneCheckTests(SimpleTestCase):

    def test_sound_zones_agree_everywhere(self):
        rng = np.random.default_rng(0)
        for zone in (singleton_zone(1, circle(1, 2, 2)), lens(), triple()):
            self.assertEqual(monte_carlo_zone_check(zone, 5000, rng), 0)

    def test_corrupted_vertex_is_detected(self):
        zone = lens()
        broken = replace(zone, vertices=(Point(0.5, 0.5), zone.vertices[1]))

        self.assertGreater(monte_carlo_zone_check(broken, 5000, np.random.default_rng(0)), 0)

    def test_sample_count_comes_from_settings(self):
        zone = lens()
        broken = replace(zone, vertices=(Point(0.5, 0.5), zone.vertices[1]))

        self.assertGreater(monte_carlo_zone_check(broken, rng=np.random.default_rng(0)), 0)
        with crasze("ORACLE", MONTE_CARLO_SAMPLES=0):
            self.assertEqual(monte_carlo_zone_check(broken, rng=np.random.default_rng(0)), 0)


class SampledWaypointTests(SimpleTestCase):

    def test_disjoint_segment(self):
        zone = singleton_zone(1, circle(1, 0, 3))
        point, best = sampled_best_waypoint(Point(-5, 0), Point(5, 0), zone)

        self.assertAlmostEqual(best, 2 * math.sqrt(29), places=6)
        self.assertAlmostEqual(point.y, 2.0, places=6)

    def test_crossing_segment_has_no_detour(self):
        zone = singleton_zone(1, circle(1, 0, 0))
        _, best = sampled_best_waypoint(Point(-5, 0), Point(5, 0), zone)
        self.assertAlmostEqual(best, 10.0)

    def test_sparse_boundary_sweep_rejected(self):
        with self.assertRaises(ValueError):
            sampled_best_waypoint(Point(0, 0), Point(1, 0), lens(), n_boundary=100)

    def test_boundary_sweep_size_comes_from_settings(self):
        with crasze("ORACLE", BOUNDARY_SAMPLES=100):
            with self.assertRaises(ValueError):
                sampled_best_waypoint(Point(0, 0), Point(1, 0), lens())
