"""
Experiment harness: multi-seed batches, mean/SD summaries and the
parameter-setting score.

Standard deviations are population SDs (ddof=0) throughout; the CSV header
says so.
"""

import logging
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import pandas as pd
from django.conf import settings
from django.db import transaction

from .models import RunRecord
from .pipeline import run
from .serializers import RunRecordSerializer

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "instance",
    "algorithm",
    "budget",
    "prize_avg",
    "prize_sd",
    "cost_avg",
    "cost_sd",
    "time_avg_s",
    "time_sd_s",
]
SD_HEADER = "# sd: population\n"


@dataclass
class BatchResult:
    batch: str
    records: list[RunRecord]
    summary: pd.DataFrame

    @property
    def failures(self):
        return [r for r in self.records if r.failed]


def execute_run(instance, config, seed, batch):
    """One (instance, seed) run as an unsaved RunRecord; errors become failed records"""
    try:
        solution, _ = run(instance, config, seed)
    except Exception as exc:
        logger.exception("run %s#%s failed", instance.name, seed)
        return RunRecord(
            batch=batch,
            instance=instance.name,
            algorithm=config.algorithm,
            seed=seed,
            budget=instance.budget,
            runtime_s=0.0,
            status=RunRecord.Status.FAILED,
            error=f"{type(exc).__name__}: {exc}",
        )
    return RunRecord(
        batch=batch,
        instance=instance.name,
        algorithm=solution.algorithm,
        seed=seed,
        budget=solution.budget,
        prize=solution.prize,
        cost=solution.cost,
        runtime_s=solution.runtime_s,
        status=RunRecord.Status.TRUNCATED if solution.truncated else RunRecord.Status.OK,
    )


def run_batch(instances, config, seeds, parallelism=None, batch=None, persist=True):
    seeds = list(seeds)
    if len(set(seeds)) != len(seeds):
        raise ValueError("seeds must be distinct")
    parallelism = parallelism or settings.CRASZE["JOBS"]
    batch = batch or uuid.uuid4().hex[:12]
    tasks = [(instance, seed) for instance in instances for seed in seeds]
    logger.info(
        "batch %s: %d runs (%d instances x %d seeds) on %d workers",
        batch,
        len(tasks),
        len(instances),
        len(seeds),
        parallelism,
    )

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        records = list(
            pool.map(lambda task: execute_run(task[0], config, task[1], batch), tasks)
        )
    records.sort(key=lambda r: (r.instance, r.seed))

    if persist:
        with transaction.atomic():
            RunRecord.objects.bulk_create(records)
    return BatchResult(batch=batch, records=records, summary=summarize(records))


def summarize(records):
    """Mean and population SD of prize, cost and runtime per instance"""
    rows = [
        row
        for row in RunRecordSerializer(records, many=True).data
        if row["status"] != RunRecord.Status.FAILED
    ]
    if not rows:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)

    frame = pd.DataFrame(rows)
    grouped = frame.groupby(["instance", "algorithm", "budget"], sort=True)[
        ["prize", "cost", "runtime_s"]
    ]
    means = grouped.mean()
    sds = grouped.std(ddof=0)
    summary = pd.DataFrame(
        {
            "prize_avg": means["prize"],
            "prize_sd": sds["prize"],
            "cost_avg": means["cost"],
            "cost_sd": sds["cost"],
            "time_avg_s": means["runtime_s"],
            "time_sd_s": sds["runtime_s"],
        }
    ).reset_index()
    return summary[SUMMARY_COLUMNS]


def write_summary_csv(summary, handle):
    handle.write(SD_HEADER)
    summary.to_csv(handle, index=False, lineterminator="\n")


def records_frame(records):
    return pd.DataFrame(
        RunRecordSerializer(records, many=True).data,
        columns=RunRecordSerializer.Meta.fields,
    )


def score_settings(results):
    """
    Score each parameter setting across instances.

    ``results`` needs columns setting, instance, cost and runtime_s; repeated
    rows for one (setting, instance) are averaged first. Per instance a
    setting earns half a point for cost and half for runtime, each scaled
    between the worst (0) and the best (1) setting. A term whose best and
    worst coincide is worth the full half point.
    """
    frame = (
        results.groupby(["setting", "instance"], sort=True)[["cost", "runtime_s"]]
        .mean()
        .reset_index()
    )
    per_instance = frame.groupby("instance")

    def term(column):
        low = per_instance[column].transform("min")
        high = per_instance[column].transform("max")
        span = high - low
        return ((high - frame[column]) / span.where(span > 0)).fillna(1.0)

    frame["score"] = 0.5 * (term("cost") + term("runtime_s"))
    return frame.groupby("setting")["score"].sum().sort_values(ascending=False, kind="stable")
