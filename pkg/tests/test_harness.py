"""Tests for the seeded verification harness: registry, reports, sweeps, repro files."""

import dataclasses
import json

import numpy as np
import pytest

from matmeans import DomainError, ScalarChain
from matmeans import harness
from matmeans.harness import Built, CaseConfig, Resample
from matmeans.reporting import (
    aggregate_report,
    chain_slacks,
    reports_to_csv,
    scalar_chain_slacks,
)


class TestChainChecking:
    def test_equal_chain_has_zero_slacks(self):
        chain = ScalarChain(("a", "b", "c"), (2.0, 2.0, 2.0))
        np.testing.assert_array_equal(scalar_chain_slacks(chain), [0.0, 0.0])

    def test_normalized_slacks(self):
        # Differences divided by max(1, largest magnitude): (1,1)/2 here.
        chain = ScalarChain(("a", "b", "c"), (0.0, 1.0, 2.0))
        np.testing.assert_allclose(scalar_chain_slacks(chain), [0.5, 0.5])

    def test_violation_reported(self):
        chain = ScalarChain(("hi", "lo"), (1.0, 0.5))
        np.testing.assert_allclose(chain_slacks(chain), [-0.5])

    def test_chain_validation(self):
        with pytest.raises(DomainError):
            ScalarChain(("one",), (1.0,))
        with pytest.raises(DomainError):
            ScalarChain(("a", "b"), (1.0, float("nan")))


class TestRegistry:
    def test_at_least_thirty_cases(self):
        assert len(harness.case_names()) >= 30

    def test_unknown_case_rejected(self):
        with pytest.raises(DomainError):
            harness.run_case("no_such_case")

    def test_descriptions_present(self):
        for name in harness.case_names():
            assert harness.case_description(name)


class TestRunCase:
    def test_deterministic_reports(self):
        r1 = harness.run_case("young_reverse_pos", instances=50)
        r2 = harness.run_case("young_reverse_pos", instances=50)
        assert r1 == r2
        assert r1.csv_row() == r2.csv_row()

    def test_failure_counting_and_repro_files(self, tmp_path):
        def always_fails(rng, cfg, forced):
            return Built(
                chain=ScalarChain(("hi", "lo"), (1.0, 0.5)),
                payload={"note": "synthetic"},
            )

        harness.REGISTRY["_synthetic_fail"] = harness.CaseDef(
            "_synthetic_fail", always_fails, {"instances": 5}, (), "synthetic"
        )
        try:
            report = harness.run_case("_synthetic_fail", failures_dir=tmp_path)
            assert report.failures == 5
            assert report.instances == 5
            assert report.min_slack == pytest.approx(-0.5)
            files = sorted(tmp_path.glob("_synthetic_fail-*.json"))
            assert len(files) == 5
            data = json.loads(files[0].read_text())
            assert data["case"] == "_synthetic_fail"
            assert data["slacks"] == [-0.5]
            assert data["params"] == {"note": "synthetic"}
        finally:
            harness.REGISTRY.pop("_synthetic_fail")

    def test_resample_budget_enforced(self):
        def always_skips(rng, cfg, forced):
            raise Resample("never valid")

        harness.REGISTRY["_synthetic_skip"] = harness.CaseDef(
            "_synthetic_skip", always_skips, {"instances": 2}, (), "synthetic"
        )
        try:
            with pytest.raises(RuntimeError):
                harness.run_case("_synthetic_skip")
        finally:
            harness.REGISTRY.pop("_synthetic_skip")

    def test_skip_accounting(self):
        report = harness.run_case("kantorovich_operator", instances=40)
        assert report.failures == 0
        assert report.skipped >= 0
        assert report.instances == 40

    def test_zero_weight_range_gives_zero_slack_ends(self):
        # Degenerate weight range: every chain collapses, slacks ~ 0.
        report = harness.run_case(
            "young_reverse_pos", instances=20, nu_range=(0.0, 0.0)
        )
        assert report.failures == 0
        assert report.max_gap <= 1e-10


class TestRunSuite:
    def test_subset_and_csv(self):
        names = ("young_reverse_pos", "kantorovich_scalar")
        reports = harness.run_suite(names=names, instances=20)
        assert [r.name for r in reports] == list(names)
        csv = reports_to_csv(reports)
        lines = csv.strip().split("\n")
        assert lines[0] == "case,instances,skipped,failures,min_slack,max_gap"
        assert len(lines) == 3

    def test_unknown_name_rejected_before_running(self):
        with pytest.raises(DomainError):
            harness.run_suite(names=("young_reverse_pos", "bogus"))

    def test_deterministic_csv(self):
        names = ("harmonic_reverse", "trace_depth1")
        csv1 = reports_to_csv(harness.run_suite(names=names, instances=15))
        csv2 = reports_to_csv(harness.run_suite(names=names, instances=15))
        assert csv1 == csv2


class TestBuildInstance:
    def test_deterministic(self):
        b1 = harness.build_instance("young_reverse_pos", 3)
        b2 = harness.build_instance("young_reverse_pos", 3)
        assert b1.payload == b2.payload
        assert b1.chain.values == b2.chain.values

    def test_forced_parameters_keep_instance_identity(self):
        b1 = harness.build_instance("young_reverse_pos", 5, forced={"depth": 1})
        b2 = harness.build_instance("young_reverse_pos", 5, forced={"depth": 4})
        assert b1.payload["x"] == b2.payload["x"]
        assert b1.payload["y"] == b2.payload["y"]
        assert b1.payload["nu"] == b2.payload["nu"]
        assert b1.payload["depth"] == 1 and b2.payload["depth"] == 4

    def test_instance_rng_stability(self):
        a = harness.instance_rng(7, "case", 0).integers(1 << 30)
        b = harness.instance_rng(7, "case", 0).integers(1 << 30)
        assert a == b
        c = harness.instance_rng(7, "case", 1).integers(1 << 30)
        assert a != c


class TestSweep:
    def test_depth_sweep_gain_nondecreasing(self):
        rows = harness.sweep(
            "young_reverse_pos", "depth", range(1, 9), instances=25
        )
        gains = [r.mean_gain for r in rows]
        assert all(b >= a - 1e-12 for a, b in zip(gains, gains[1:]))

    def test_nu_sweep_zero_row(self):
        rows = harness.sweep("young_reverse_pos", "nu", [0.0, 1.0, 2.0], instances=10)
        assert rows[0].mean_gain == pytest.approx(0.0, abs=1e-12)
        assert rows[0].mean_gap == pytest.approx(0.0, abs=1e-9)
        assert rows[2].mean_gain >= rows[1].mean_gain >= 0.0

    def test_cond_sweep_smoke(self):
        rows = harness.sweep(
            "operator_reverse_pos", "cond", [2.0, 10.0, 100.0], instances=5
        )
        assert len(rows) == 3
        assert all(np.isfinite(r.mean_gap) and np.isfinite(r.mean_gain) for r in rows)

    def test_unsupported_parameter_rejected(self):
        with pytest.raises(DomainError):
            harness.sweep("kantorovich_scalar", "depth", [1, 2])


class TestReportAggregation:
    def test_failure_threshold(self):
        rows = [np.array([0.1, -1e-3]), np.array([0.2, 0.3]), np.array([-1e-12, 0.0])]
        report = aggregate_report("x", rows, [1.0, 2.0, 0.5], rel_tol=1e-9)
        assert report.instances == 3
        assert report.failures == 1  # only the -1e-3 row breaches -1e-9
        assert report.min_slack == pytest.approx(-1e-3)
        assert report.max_gap == 2.0

    def test_quantiles_shape(self):
        rows = [np.array([float(i), float(i)]) for i in range(10)]
        report = aggregate_report("q", rows, [0.0], rel_tol=1e-9)
        assert len(report.link_quantiles) == 2
        q10, q50, q90 = report.link_quantiles[0]
        assert q10 <= q50 <= q90

    def test_config_is_frozen_dataclass(self):
        cfg = CaseConfig()
        with pytest.raises(dataclasses.FrozenInstanceError):
            cfg.instances = 5
