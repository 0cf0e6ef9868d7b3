"""
Management command to benchmark a solver over seeds and instances


USAGE:
    python manage.py migrate                                              # once: run records live in SQLite
    python manage.py bench --instance bubbles1.txt --seeds 20 --out bubbles1.csv
    python manage.py bench --instance a.txt b.txt --mode sop --budget-level 0.6 --jobs 4
    python manage.py bench --instance a.txt --batch acs-40x250 --clear   # replace a named batch
    python manage.py bench --instance a.txt --records runs.csv           # per-run rows as well
    python manage.py bench --instance a.txt --sweep                      # CEOP 0.9/0.6/0.3, TDDP 0.6/0.9/1.2
"""

from django.core.management.base import BaseCommand

from ceop.bench import records_frame, run_batch, write_summary_csv
from ceop.instances import budget_sweep, load_instance
from ceop.management.options import (
    add_budget_arguments,
    add_solver_arguments,
    load_with_budget,
    positive_int,
    resolve_seed,
    run_config,
    seed_value,
    translated_errors,
)
from ceop.models import RunRecord


class Command(BaseCommand):
    help = "Run a solver over several seeds and summarize mean and population SD"

    def add_arguments(self, parser):
        parser.add_argument("--instance", nargs="+", required=True, help="Instance file(s)")
        parser.add_argument(
            "--seeds",
            type=positive_int,
            default=20,
            help="Number of seeds, counted up from --seed (default: 20)",
        )
        parser.add_argument("--seed", type=seed_value, help="First seed")
        parser.add_argument("--jobs", type=positive_int, help="Worker threads")
        parser.add_argument("--batch", help="Label stored on every run record")
        parser.add_argument(
            "--clear",
            action="store_true",
            help="Delete earlier records of the same --batch first",
        )
        parser.add_argument("--out", help="Summary CSV path (default: standard output)")
        parser.add_argument("--records", help="Also write every run record to this CSV")
        parser.add_argument(
            "--sweep",
            action="store_true",
            help="Run every standard budget level of each instance's kind",
        )
        add_budget_arguments(parser)
        add_solver_arguments(parser)

    def handle(self, *args, **options):
        first = resolve_seed(options)
        seeds = [first + k for k in range(options["seeds"])]
        batch = options["batch"]

        if options["clear"] and batch:
            self.stdout.write(f"Clearing records of batch {batch}...")
            deleted, _ = RunRecord.objects.for_batch(batch).delete()
            self.stdout.write(self.style.SUCCESS(f"✓ {deleted} records cleared"))

        with translated_errors():
            config = run_config(options)
            if options["sweep"]:
                if options["budget_level"] is not None or options["budget"] is not None:
                    raise ValueError("--sweep picks the budget levels itself")
                instances = [
                    swept for path in options["instance"] for swept in budget_sweep(load_instance(path))
                ]
            else:
                instances = [
                    load_with_budget(path, options["budget_level"], options["budget"])
                    for path in options["instance"]
                ]
            result = run_batch(instances, config, seeds, options["jobs"], batch)

            if options["out"] is None:
                write_summary_csv(result.summary, self.stdout)
            else:
                with open(options["out"], "w", encoding="utf-8", newline="") as handle:
                    write_summary_csv(result.summary, handle)
            if options["records"]:
                records_frame(result.records).to_csv(
                    options["records"], index=False, lineterminator="\n"
                )

        for failure in result.failures:
            self.stdout.write(
                self.style.ERROR(f"✗ {failure.instance} seed {failure.seed}: {failure.error}")
            )
        self.stdout.write(
            self.style.SUCCESS(
                f"\n✓ Batch {result.batch}: {len(result.records) - len(result.failures)} "
                f"of {len(result.records)} runs succeeded"
            )
        )
