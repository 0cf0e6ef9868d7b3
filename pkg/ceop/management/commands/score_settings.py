"""
Management command to rank parameter settings by normalized cost and runtime


USAGE:
    python manage.py score_settings --results grid.csv
    python manage.py score_settings --results grid.csv --out scores.csv

The results CSV needs the columns setting, instance, cost and runtime_s;
bench summaries (cost_avg, time_avg_s) are accepted as well.
"""

import pandas as pd
from django.core.management.base import BaseCommand

from ceop.bench import score_settings
from ceop.management.options import translated_errors

ALIASES = {"cost_avg": "cost", "time_avg_s": "runtime_s"}
REQUIRED = ("setting", "instance", "cost", "runtime_s")


class Command(BaseCommand):
    help = "Score parameter settings across instances"

    def add_arguments(self, parser):
        parser.add_argument("--results", required=True, help="CSV of per-setting results")
        parser.add_argument("--out", help="Write the scores to this CSV")

    def handle(self, *args, **options):
        with translated_errors():
            frame = pd.read_csv(options["results"], comment="#").rename(columns=ALIASES)
            missing = [c for c in REQUIRED if c not in frame.columns]
            if missing:
                raise ValueError(f"results CSV lacks column(s): {', '.join(missing)}")
            scores = score_settings(frame)
            if options["out"]:
                scores.rename("score").to_csv(options["out"], lineterminator="\n")

        instances = frame["instance"].nunique()
        self.stdout.write(f"{len(scores)} settings over {instances} instances")
        for setting, score in scores.items():
            self.stdout.write(f"  {setting}: {score:.3f}")
        self.stdout.write(self.style.SUCCESS(f"\n✓ Best setting: {scores.index[0]}"))
