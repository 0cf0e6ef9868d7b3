"""
Management command to compute the exact vertex-route optimum of a small instance


USAGE:
    python manage.py oracle --instance toy.txt                   # optimal prize over zone vertices
    python manage.py oracle --instance toy.txt --compare         # also run the ant colony and compare
    python manage.py oracle --instance toy.txt --max-zones 10 --budget-level 0.6
"""

from django.core.management.base import BaseCommand

from ceop.acs import AcsParams, SopGraph, solve_sop
from ceop.management.options import (
    add_budget_arguments,
    load_with_budget,
    positive_int,
    resolve_seed,
    seed_value,
    translated_errors,
)
from ceop.oracle import brute_force_sop
from ceop.rszd import RszdParams, rszd


class Command(BaseCommand):
    help = "Exhaustive set orienteering optimum for small instances"

    def add_arguments(self, parser):
        parser.add_argument("--instance", required=True, help="Instance file")
        parser.add_argument("--seed", type=seed_value, help="Discretization (and --compare) seed")
        parser.add_argument("--max-zones", type=positive_int, help="Refuse layouts larger than this")
        parser.add_argument("--no-prune", action="store_true", help="Disable bound pruning")
        parser.add_argument(
            "--compare",
            action="store_true",
            help="Run the ant colony on the same layout and report the gap",
        )
        add_budget_arguments(parser)

    def handle(self, *args, **options):
        seed = resolve_seed(options)
        with translated_errors():
            instance = load_with_budget(
                options["instance"], options["budget_level"], options["budget"]
            )
            if instance.is_tddp:
                raise ValueError("the oracle solves distance-budget instances only")
            layout = rszd(instance, RszdParams.from_settings(instance), seed)
            graph = SopGraph.from_layout(layout, instance)
            search = brute_force_sop(
                graph, prune=not options["no_prune"], max_zones=options["max_zones"]
            )

        self.stdout.write(
            f"{instance.name}: {graph.zone_count} zones, {graph.vertex_count} vertices, "
            f"{search.nodes_expanded} nodes expanded"
        )
        self.stdout.write(
            self.style.SUCCESS(
                f"optimal prize {search.best_prize:.4f} cost {search.best_cost:.4f}"
            )
        )
        if not options["compare"]:
            return

        solution = solve_sop(graph, AcsParams.from_settings(), seed)
        line = f"ant colony prize {solution.prize:.4f} cost {solution.cost:.4f}"
        if solution.prize + 1e-9 >= search.best_prize:
            self.stdout.write(self.style.SUCCESS(f"{line} (matches)"))
        else:
            self.stdout.write(
                self.style.WARNING(f"{line} (gap {search.best_prize - solution.prize:.4f})")
            )
