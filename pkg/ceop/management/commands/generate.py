"""
Management command to generate a random instance file


USAGE:
    python manage.py generate --n 10 --radius 1 --seed 7 --out rand10.txt
    python manage.py generate --n 50 --overlap-ratio 0.02 --extent 100 --out rand50.txt
    python manage.py generate --n 30 --kind TDDP --budget-level 1.2 --out tddp30.txt    # drone-range radius
    python manage.py generate --n 20 --radius 2 --prize-range 1 12        # print to stdout
"""

from django.core.management.base import BaseCommand

from ceop.generator import generate_instance
from ceop.instances import Kind, serialize_instance
from ceop.management.options import positive_int, resolve_seed, seed_value, translated_errors, write_text


class Command(BaseCommand):
    help = "Generate a random CEOP or TDDP instance"

    def add_arguments(self, parser):
        parser.add_argument("--n", type=positive_int, required=True, help="Number of target circles")
        size = parser.add_mutually_exclusive_group()
        size.add_argument(
            "--radius",
            type=float,
            help="Uniform circle radius (TDDP default: the configured drone range)",
        )
        size.add_argument(
            "--overlap-ratio",
            type=float,
            help="Radius as a fraction of the square's side",
        )
        parser.add_argument("--extent", type=float, help="Side of the square holding the centers")
        parser.add_argument(
            "--prize-range",
            type=float,
            nargs=2,
            metavar=("LOW", "HIGH"),
            help="Integer prizes are drawn uniformly from this range",
        )
        parser.add_argument("--kind", choices=Kind.values, default=Kind.CEOP)
        parser.add_argument("--budget-level", type=float, help="Written as BUDGET_LEVEL")
        parser.add_argument("--name", help="Instance name (default: rand<n>-<seed>)")
        parser.add_argument("--seed", type=seed_value)
        parser.add_argument("--out", help="Output path (default: standard output)")

    def handle(self, *args, **options):
        seed = resolve_seed(options)
        with translated_errors():
            instance = generate_instance(
                options["n"],
                radius=options["radius"],
                overlap_ratio=options["overlap_ratio"],
                extent=options["extent"],
                prize_range=options["prize_range"],
                kind=options["kind"],
                seed=seed,
                budget_level=options["budget_level"],
                name=options["name"],
            )
            text = serialize_instance(instance)
            if options["out"] is None:
                self.stdout.write(text, ending="")
                return
            write_text(options["out"], text)

        self.stdout.write(
            self.style.SUCCESS(
                f"✓ Wrote {instance.name} ({len(instance.circles)} circles, "
                f"radius {instance.radius:g}) to {options['out']}"
            )
        )
