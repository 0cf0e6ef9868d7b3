import logging
import time
from dataclasses import dataclass, replace

from django.conf import settings
from django.core.exceptions import ValidationError
from django.db import models

from .acs import AcsParams, SopGraph, solve_sop
from .arc_search import ArcSearchParams, refine_ceop
from .context import run_context
from .instances import normalize_prizes
from .pso_iacs import PsoParams, solve_tddp
from .rszd import RszdParams, rszd

logger = logging.getLogger(__name__)


class Mode(models.TextChoices):
    SOP = "sop", "Vertex-only set orienteering"
    CEOP = "ceop", "Set orienteering with arc refinement"
    TDDP = "tddp", "Truck and drone delivery"


ALGORITHMS = {
    Mode.SOP: "rszd-acs",
    Mode.CEOP: "rszd-acs-arc",
    Mode.TDDP: "rszd-pso-iacs",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a solve needs besides the instance and the seed"""

    mode: str
    acs: AcsParams
    pso: PsoParams
    arc: ArcSearchParams
    rszd_iterations: int | None = None
    max_degree: int | None = None
    normalize: bool = True

    @classmethod
    def from_settings(
        cls,
        mode,
        rszd_iterations=None,
        max_degree=None,
        normalize=True,
        acs=None,
        pso=None,
        arc=None,
    ):
        if mode not in Mode.values:
            raise ValueError(f"unknown mode {mode}")
        return cls(
            mode=mode,
            acs=AcsParams.from_settings(**(acs or {})),
            pso=PsoParams.from_settings(**(pso or {})),
            arc=ArcSearchParams.from_settings(**(arc or {})),
            rszd_iterations=rszd_iterations,
            max_degree=max_degree,
            normalize=normalize,
        )

    @property
    def algorithm(self):
        return ALGORITHMS[self.mode]


def prepare_instance(instance, config):
    if config.mode == Mode.TDDP:
        if not instance.is_tddp:
            raise ValidationError(
                f"{instance.name} is not a TDDP instance", code="mode_mismatch"
            )
        if config.normalize:
            lo, hi = settings.CRASZE["TDDP"]["PRIZE_RANGE"]
            instance = normalize_prizes(instance, lo, hi)
    elif instance.is_tddp:
        # TDDP budgets are hours of truck time, not distances
        raise ValidationError(
            f"{instance.name} is a TDDP instance; use mode tddp", code="mode_mismatch"
        )
    return instance


def run(instance, config, seed):
    """Discretize and solve one instance; returns (solution, layout)"""
    with run_context(instance.name, seed):
        started = time.perf_counter()
        instance = prepare_instance(instance, config)
        params = RszdParams.from_settings(instance, config.rszd_iterations, config.max_degree)
        layout = rszd(instance, params, seed)

        if config.mode == Mode.TDDP:
            solution = solve_tddp(instance, layout, config.pso, config.acs, seed)
        else:
            graph = SopGraph.from_layout(layout, instance)
            solution = solve_sop(graph, config.acs, seed, config.algorithm)
            if config.mode == Mode.CEOP:
                solution = refine_ceop(solution, layout, graph, config.arc)

        solution = replace(
            solution,
            algorithm=config.algorithm,
            runtime_s=time.perf_counter() - started,
        )
        logger.info(
            "%s %s: prize %.4f cost %.4f budget %.4f (%.2fs)",
            config.algorithm,
            instance.name,
            solution.prize,
            solution.cost,
            solution.budget,
            solution.runtime_s,
        )
    return solution, layout
