"""
Management command to solve one instance


USAGE:
    python manage.py solve --instance bubbles1.txt --mode ceop --budget-level 0.9 --out sol.json
    python manage.py solve --instance bubbles1.txt --mode sop --seed 3 --out sol.json
    python manage.py solve --instance tddp.txt --mode tddp --budget-level 1.2 --out sol.json
    python manage.py solve --instance rand10.txt --ants 20 --acs-iters 100 --svg route.svg

Exit codes: 0 solved, 1 invalid or infeasible instance, 2 bad flags,
3 the swarm hit its time cap (the JSON is still written, truncated=true).
"""

from django.core.management.base import BaseCommand, CommandError

from ceop.management.options import (
    EXIT_TRUNCATED,
    add_budget_arguments,
    add_solver_arguments,
    load_with_budget,
    resolve_seed,
    run_config,
    seed_value,
    translated_errors,
    write_text,
)
from ceop.pipeline import run
from ceop.serializers import serialize_solution
from ceop.svg import render_solution_svg


class Command(BaseCommand):
    help = "Solve an instance and write the solution JSON"

    def add_arguments(self, parser):
        parser.add_argument("--instance", required=True, help="Instance file")
        parser.add_argument("--seed", type=seed_value)
        parser.add_argument("--out", help="Solution JSON path (default: standard output)")
        parser.add_argument("--svg", help="Also draw the route to this SVG file")
        add_budget_arguments(parser)
        add_solver_arguments(parser)

    def handle(self, *args, **options):
        seed = resolve_seed(options)
        with translated_errors():
            config = run_config(options)
            instance = load_with_budget(
                options["instance"], options["budget_level"], options["budget"]
            )
            solution, layout = run(instance, config, seed)
            text = serialize_solution(solution)
            if options["svg"]:
                write_text(options["svg"], render_solution_svg(instance, solution, layout))
            if options["out"] is None:
                self.stdout.write(text, ending="")
            else:
                write_text(options["out"], text)

        # standard output carries only the JSON when there is no --out
        report = self.stdout if options["out"] else self.stderr
        summary = (
            f"{solution.instance_name} [{solution.algorithm}] prize {solution.prize:.4f} "
            f"cost {solution.cost:.4f} / {solution.budget:.4f} runtime {solution.runtime_s:.2f}s"
        )
        if solution.truncated:
            report.write(self.style.WARNING(summary))
            raise CommandError("time cap reached; solution is truncated", returncode=EXIT_TRUNCATED)
        report.write(self.style.SUCCESS(summary))
