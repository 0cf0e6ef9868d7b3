import io

import pandas as pd
from django.test import SimpleTestCase, TestCase

from ceop.bench import SD_HEADER, SUMMARY_COLUMNS, run_batch, score_settings, summarize, write_summary_csv
from ceop.generator import generate_instance
from ceop.instances import Kind
from ceop.models import RunRecord
from ceop.pipeline import Mode, RunConfig

QUICK = {"n_ants": 6, "n_iter": 10, "max_no_impr": 4}


def record(prize, cost=1.0, runtime_s=0.5, seed=0, instance="a", status=RunRecord.Status.OK):
    return RunRecord(
        batch="b",
        instance=instance,
        algorithm="rszd-acs",
        seed=seed,
        budget=10.0,
        prize=prize,
        cost=cost,
        runtime_s=runtime_s,
        status=status,
    )


class SummaryTests(SimpleTestCase):

    def test_population_sd(self):
        """Prizes 10 and 14 average 12 with a population SD of 2"""
        summary = summarize([record(10, seed=1), record(14, seed=2)])

        self.assertEqual(list(summary.columns), SUMMARY_COLUMNS)
        row = summary.iloc[0]
        self.assertAlmostEqual(row["prize_avg"], 12.0)
        self.assertAlmostEqual(row["prize_sd"], 2.0)

    def test_identical_runs_have_zero_sd(self):
        summary = summarize([record(7, seed=k) for k in range(5)])
        self.assertEqual(summary.iloc[0]["prize_sd"], 0.0)
        self.assertEqual(summary.iloc[0]["time_sd_s"], 0.0)

    def test_failed_runs_are_left_out(self):
        failed = record(None, cost=None, seed=3, status=RunRecord.Status.FAILED)
        summary = summarize([record(4, seed=1), failed])

        self.assertEqual(len(summary), 1)
        self.assertAlmostEqual(summary.iloc[0]["prize_avg"], 4.0)

    def test_one_row_per_instance(self):
        summary = summarize([record(1, instance="b"), record(2, instance="a"), record(3, instance="b", seed=1)])
        self.assertEqual(summary["instance"].tolist(), ["a", "b"])

    def test_empty_summary_keeps_columns(self):
        self.assertEqual(list(summarize([]).columns), SUMMARY_COLUMNS)

    def test_csv_header(self):
        handle = io.StringIO()
        write_summary_csv(summarize([record(10, seed=1), record(14, seed=2)]), handle)
        lines = handle.getvalue().splitlines()

        self.assertEqual(lines[0] + "\n", SD_HEADER)
        self.assertEqual(lines[1], ",".join(SUMMARY_COLUMNS))
        self.assertEqual(len(lines), 3)


class ScoreSettingsTests(SimpleTestCase):

    def setUp(self):
        self.results = pd.DataFrame(
            {
                "setting": ["fast", "fast", "slow", "slow", "mid", "mid"],
                "instance": ["i1", "i2", "i1", "i2", "i1", "i2"],
                "cost": [10.0, 20.0, 8.0, 16.0, 9.0, 18.0],
                "runtime_s": [1.0, 2.0, 5.0, 6.0, 3.0, 4.0],
            }
        )

    def test_scores_are_bounded(self):
        scores = score_settings(self.results)
        for value in scores:
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 2.0)

    def test_each_setting_scored(self):
        scores = score_settings(self.results)

        self.assertEqual(set(scores.index), {"fast", "slow", "mid"})
        self.assertAlmostEqual(scores["fast"], 1.0)
        self.assertAlmostEqual(scores["slow"], 1.0)
        self.assertAlmostEqual(scores["mid"], 1.0)

    def test_affine_rescaling_keeps_scores(self):
        scaled = self.results.assign(
            cost=self.results["cost"] * 3 + 7, runtime_s=self.results["runtime_s"] * 0.5 + 1
        )
        pd.testing.assert_series_equal(
            score_settings(self.results).sort_index(), score_settings(scaled).sort_index()
        )

    def test_equal_settings_earn_full_marks(self):
        flat = self.results.assign(cost=5.0, runtime_s=1.0)
        scores = score_settings(flat)
        for value in scores:
            self.assertAlmostEqual(value, 2.0)

    def test_repeated_rows_are_averaged(self):
        repeated = pd.concat([self.results, self.results.assign(cost=self.results["cost"] + 0.0)])
        pd.testing.assert_series_equal(
            score_settings(self.results).sort_index(), score_settings(repeated).sort_index()
        )


class RunBatchTests(TestCase):

    def setUp(self):
        self.instance = generate_instance(25, overlap_ratio=0.05, seed=1)
        self.config = RunConfig.from_settings(Mode.SOP, rszd_iterations=2, acs=QUICK)

    def test_batch_persists_records_and_summary(self):
        result = run_batch([self.instance], self.config, seeds=[1, 2, 3], parallelism=2, batch="t1")

        self.assertEqual(RunRecord.objects.for_batch("t1").count(), 3)
        self.assertEqual([r.seed for r in result.records], [1, 2, 3])
        self.assertEqual(len(result.summary), 1)
        self.assertEqual(result.summary.iloc[0]["algorithm"], "rszd-acs")
        self.assertEqual(result.failures, [])

    def test_failed_run_is_recorded(self):
        drones = generate_instance(
            12, overlap_ratio=0.1, kind=Kind.TDDP, seed=2, budget_level=1.2, name="drones"
        )
        result = run_batch([drones], self.config, seeds=[4], batch="t2")

        self.assertEqual(len(result.failures), 1)
        self.assertTrue(result.failures[0].error.startswith("ValidationError"))
        self.assertEqual(RunRecord.objects.succeeded().filter(batch="t2").count(), 0)
        self.assertTrue(result.summary.empty)

    def test_duplicate_seeds_rejected(self):
        with self.assertRaises(ValueError):
            run_batch([self.instance], self.config, seeds=[1, 1])

    def test_without_persistence(self):
        run_batch([self.instance], self.config, seeds=[5], persist=False)
        self.assertEqual(RunRecord.objects.count(), 0)
