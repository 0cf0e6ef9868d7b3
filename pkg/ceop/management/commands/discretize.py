"""
Management command to group an instance's circles into Steiner zones


USAGE:
    python manage.py discretize --instance rand10.txt                     # layout JSON on stdout
    python manage.py discretize --instance rand10.txt --out layout.json
    python manage.py discretize --instance rand10.txt --iters 20 --max-degree 3 --seed 4
    python manage.py discretize --instance rand10.txt --out layout.json --svg layout.svg
"""

from django.core.management.base import BaseCommand

from ceop.instances import load_instance
from ceop.management.options import positive_int, resolve_seed, seed_value, translated_errors, write_text
from ceop.rszd import RszdParams, rszd
from ceop.serializers import serialize_layout
from ceop.svg import render_layout_svg


class Command(BaseCommand):
    help = "Discretize an instance into a Steiner zone layout"

    def add_arguments(self, parser):
        parser.add_argument("--instance", required=True, help="Instance file")
        parser.add_argument("--iters", type=positive_int, help="Shuffled passes (best layout wins)")
        parser.add_argument("--max-degree", type=positive_int, help="Largest zone degree")
        parser.add_argument("--seed", type=seed_value)
        parser.add_argument("--out", help="Layout JSON path (default: standard output)")
        parser.add_argument("--svg", help="Also draw the layout to this SVG file")

    def handle(self, *args, **options):
        seed = resolve_seed(options)
        with translated_errors():
            instance = load_instance(options["instance"])
            params = RszdParams.from_settings(instance, options["iters"], options["max_degree"])
            layout = rszd(instance, params, seed)
            text = serialize_layout(layout)
            if options["svg"]:
                write_text(options["svg"], render_layout_svg(instance, layout))
            if options["out"] is None:
                self.stdout.write(text, ending="")
                return
            write_text(options["out"], text)

        self.stdout.write(
            self.style.SUCCESS(
                f"✓ {instance.name}: {len(instance.circles)} circles -> {len(layout.zones)} zones"
            )
        )
