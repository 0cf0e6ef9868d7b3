"""Flags and error translation shared by the solver management commands"""

import argparse
from contextlib import contextmanager

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from ..exceptions import CeopError, ParseError, TooLarge
from ..instances import load_instance
from ..pipeline import Mode, RunConfig

EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_TRUNCATED = 3


def seed_value(text):
    value = int(text)
    if value < 0 or value >= 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def resolve_seed(options):
    seed = options.get("seed")
    return settings.CRASZE["SEED"] if seed is None else seed


def describe_validation(exc):
    return f"{exc.code or 'invalid'}: {'; '.join(exc.messages)}"


@contextmanager
def translated_errors():
    """Map domain errors onto the command exit codes"""
    try:
        yield
    except TooLarge as exc:
        raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
    except (ParseError, ValidationError) as exc:
        message = describe_validation(exc) if isinstance(exc, ValidationError) else str(exc)
        raise CommandError(message, returncode=EXIT_INVALID) from exc
    except OSError as exc:
        raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
    except ValueError as exc:
        raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
    except CeopError as exc:
        raise CommandError(str(exc), returncode=EXIT_INVALID) from exc


def load_with_budget(path, budget_level=None, budget=None):
    instance = load_instance(path)
    if budget_level is not None and budget is not None:
        raise ValueError("use either --budget-level or --budget, not both")
    if budget_level is not None:
        instance = instance.with_budget_level(budget_level)
    elif budget is not None:
        instance = instance.with_budget(budget)
    return instance


def add_budget_arguments(parser):
    parser.add_argument("--budget-level", type=float, help="Budget as a fraction of BESTKNOWN")
    parser.add_argument("--budget", type=float, help="Absolute budget (distance, or hours for TDDP)")


def add_solver_arguments(parser):
    parser.add_argument(
        "--mode",
        choices=Mode.values,
        default=Mode.CEOP,
        help="sop: zone vertices only, ceop: plus arc refinement, tddp: truck and drones",
    )
    group = parser.add_argument_group("discretization")
    group.add_argument("--rszd-iters", type=positive_int, help="Shuffled discretization passes")
    group.add_argument("--max-degree", type=positive_int, help="Largest zone degree")

    group = parser.add_argument_group("ant colony")
    group.add_argument("--ants", type=positive_int)
    group.add_argument("--acs-iters", type=positive_int)
    group.add_argument("--beta", type=float)
    group.add_argument("--alpha", type=float)
    group.add_argument("--rho", type=float)
    group.add_argument("--q0", type=float)
    group.add_argument("--acs-max-no-impr", type=positive_int)

    group = parser.add_argument_group("arc search")
    group.add_argument("--arc-rounds", type=positive_int)

    group = parser.add_argument_group("particle swarm")
    group.add_argument("--particles", type=positive_int)
    group.add_argument("--pso-iters", type=positive_int)
    group.add_argument("--c1", type=float)
    group.add_argument("--c2", type=float)
    group.add_argument("--omega-min", type=float)
    group.add_argument("--omega-max", type=float)
    group.add_argument("--pso-max-no-impr", type=positive_int)
    group.add_argument("--time-cap", type=float, help="Wall-clock cap of the swarm in seconds")
    group.add_argument(
        "--no-normalize",
        action="store_true",
        help="Keep raw TDDP prizes instead of mapping them onto the configured range",
    )


def run_config(options):
    return RunConfig.from_settings(
        options["mode"],
        rszd_iterations=options.get("rszd_iters"),
        max_degree=options.get("max_degree"),
        normalize=not options.get("no_normalize", False),
        acs={
            "n_ants": options.get("ants"),
            "n_iter": options.get("acs_iters"),
            "beta": options.get("beta"),
            "alpha": options.get("alpha"),
            "rho": options.get("rho"),
            "q0": options.get("q0"),
            "max_no_impr": options.get("acs_max_no_impr"),
        },
        pso={
            "n_particles": options.get("particles"),
            "n_iter": options.get("pso_iters"),
            "c1": options.get("c1"),
            "c2": options.get("c2"),
            "omega_min": options.get("omega_min"),
            "omega_max": options.get("omega_max"),
            "max_no_impr": options.get("pso_max_no_impr"),
            "time_cap_s": options.get("time_cap"),
        },
        arc={"rounds": options.get("arc_rounds")},
    )


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
