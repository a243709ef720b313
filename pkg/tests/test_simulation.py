import json

import numpy as np
import pytest

from llfit import (
    CLEAN,
    ContaminationScenario,
    LLParams,
    LLSource,
    PointMassSource,
    SimulationConfig,
    UniformSource,
    bias_rmse,
    contaminate,
    replication_rng,
    reproduce_table,
    run_monte_carlo,
)
from llfit.simulation import (
    contamination_count,
    report_to_dict,
    write_reports_csv,
    write_reports_json,
)


class TestReplicationRng:
    def test_deterministic(self):
        a = replication_rng(5, 3).random(4)
        b = replication_rng(5, 3).random(4)
        assert np.array_equal(a, b)

    def test_indices_give_distinct_streams(self):
        a = replication_rng(5, 0).random(4)
        b = replication_rng(5, 1).random(4)
        assert not np.array_equal(a, b)


class TestContaminationCount:
    @pytest.mark.parametrize("fraction,n,expected", [
        (0.1, 25, 3),   # 2.5 rounds half away from zero
        (0.1, 10, 1),
        (0.1, 14, 1),   # 1.4 rounds down
        (0.1, 15, 2),   # 1.5 rounds half away from zero
        (0.0, 50, 0),
        (0.49, 100, 49),
    ])
    def test_rounding(self, fraction, n, expected):
        assert contamination_count(fraction, n) == expected


class TestScenario:
    def test_validation(self):
        with pytest.raises(ValueError):
            ContaminationScenario(0.5, PointMassSource(1.0))
        with pytest.raises(ValueError):
            ContaminationScenario(-0.1, PointMassSource(1.0))
        with pytest.raises(ValueError):
            ContaminationScenario(0.1)  # fraction without a source
        with pytest.raises(ValueError):
            ContaminationScenario(0.1, PointMassSource(1.0), placement="top")
        with pytest.raises(ValueError):
            PointMassSource(0.0)
        with pytest.raises(ValueError):
            UniformSource(5.0, 1.0)

    def test_labels(self):
        assert CLEAN.label == "none"
        assert ContaminationScenario(
            0.1, LLSource(LLParams(4.0, 10.0))).label == "ll(4,10)@0.1"
        assert ContaminationScenario(
            0.1, UniformSource(0.0, 20.0)).label == "uniform(0,20)@0.1"
        assert ContaminationScenario(
            0.1, PointMassSource(50.0)).label == "pointmass(50)@0.1"


class TestContaminate:
    def test_zero_fraction_is_identity(self, ll_sample):
        s = ll_sample(seed=1, n=20)
        assert contaminate(s, CLEAN, replication_rng(1, 1)) is s

    def test_point_mass_replaces_exactly_k(self, ll_sample):
        s = ll_sample(seed=2, n=25, beta=10.0)
        scenario = ContaminationScenario(0.1, PointMassSource(50.0))
        out = contaminate(s, scenario, replication_rng(2, 1))
        assert int(np.sum(out.values == 50.0)) == 3
        # default placement swaps out the largest observations
        kept = np.sort(s.values)[:-3]
        assert np.array_equal(np.sort(out.values)[:-3], kept)

    def test_uniform_support(self, ll_sample):
        s = ll_sample(seed=3, n=40)
        scenario = ContaminationScenario(0.1, UniformSource(0.0, 20.0))
        out = contaminate(s, scenario, replication_rng(3, 1))
        replaced = np.setdiff1d(out.values, s.values)
        assert len(replaced) == 4
        assert np.all((replaced > 0.0) & (replaced < 20.0))

    def test_random_placement(self, ll_sample):
        s = ll_sample(seed=4, n=30)
        scenario = ContaminationScenario(0.2, PointMassSource(7.7),
                                         placement="random")
        out = contaminate(s, scenario, replication_rng(4, 1))
        assert int(np.sum(out.values == 7.7)) == 6
        # replaced positions are not simply the largest ones every time
        draws = [contaminate(s, scenario, replication_rng(4, i)).values
                 for i in range(2, 6)]
        patterns = {tuple(np.nonzero(v == 7.7)[0]) for v in draws}
        assert len(patterns) > 1

    def test_input_sample_untouched(self, ll_sample):
        s = ll_sample(seed=5, n=25)
        before = s.values.copy()
        contaminate(s, ContaminationScenario(0.1, PointMassSource(50.0)),
                    replication_rng(5, 1))
        assert np.array_equal(s.values, before)


class TestBiasRmse:
    def test_exact_estimates(self):
        assert bias_rmse([3.0, 3.0, 3.0], 3.0) == (0.0, 0.0)

    def test_symmetric_errors(self):
        bias, rmse = bias_rmse([2.0, 4.0], 3.0)
        assert bias == 0.0 and rmse == 1.0

    def test_hand_computed(self):
        bias, rmse = bias_rmse([2.0, 4.0], 1.0)
        assert bias == pytest.approx(2.0, abs=1e-15)
        assert rmse == pytest.approx(np.sqrt(5.0), rel=1e-15)

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            bias_rmse([], 1.0)
        with pytest.raises(ValueError):
            bias_rmse([1.0, np.inf], 1.0)


class TestRunMonteCarlo:
    def test_single_replication_deterministic(self):
        cfg = SimulationConfig(n=12, M=1, truth=LLParams(1.0, 2.0), seed=99)
        a = json.dumps(report_to_dict(run_monte_carlo(cfg)), sort_keys=True)
        b = json.dumps(report_to_dict(run_monte_carlo(cfg)), sort_keys=True)
        assert a == b

    def test_parallel_matches_serial(self):
        cfg = SimulationConfig(n=10, M=24, truth=LLParams(1.0, 2.0), seed=7)
        serial = report_to_dict(run_monte_carlo(cfg, jobs=1))
        parallel = report_to_dict(run_monte_carlo(cfg, jobs=2))
        assert serial == parallel

    def test_rmse_bounds_bias(self):
        cfg = SimulationConfig(n=15, M=60, truth=LLParams(1.0, 2.5), seed=11)
        report = run_monte_carlo(cfg)
        for cell in report.cells.values():
            for stats in cell.values():
                assert stats.rmse >= abs(stats.bias)

    def test_rm_alpha_nearly_unbiased(self):
        cfg = SimulationConfig(n=25, M=400, truth=LLParams(1.0, 10.0),
                               methods=("rm",), seed=123)
        report = run_monte_carlo(cfg)
        assert abs(report.cells["rm"]["alpha"].bias) < 0.01

    def test_failures_counted_and_excluded(self):
        # a mid-range point mass at 49% frequently collapses the PE3
        # quantile span; those replications are dropped, not fatal
        cfg = SimulationConfig(
            n=25, M=50, truth=LLParams(1.0, 5.0),
            scenario=ContaminationScenario(0.49, PointMassSource(1.0),
                                           placement="random"),
            methods=("pe3", "rm"), seed=3)
        report = run_monte_carlo(cfg)
        assert report.failures["pe3"] > 0
        assert report.cells["pe3"]["alpha"].count + report.failures["pe3"] == 50
        assert report.failures["rm"] == 0

    def test_monotone_rmse_in_sample_size(self):
        small = run_monte_carlo(SimulationConfig(
            n=10, M=400, truth=LLParams(1.0, 2.5), seed=21))
        large = run_monte_carlo(SimulationConfig(
            n=100, M=400, truth=LLParams(1.0, 2.5), seed=22))
        for tag in small.cells:
            for param in ("alpha", "beta"):
                assert (large.cells[tag][param].rmse
                        < small.cells[tag][param].rmse)


class TestReproduceTable:
    def test_t1_grid_shape_and_population(self):
        reports = reproduce_table("T1", M=1, seed=5)
        assert len(reports) == 20
        sizes = [r.config.n for r in reports]
        shapes = [r.config.truth.beta for r in reports]
        assert sizes == sorted(sizes)
        assert shapes[:4] == [1.5, 2.5, 5.0, 10.0]
        for report in reports:
            assert all(cell is not None for cell in report.cells.values())
            assert len(report.cells) == 7

    def test_t2_shares_t1_grid(self):
        t1 = reproduce_table("T1", M=1, seed=5)
        t2 = reproduce_table("T2", M=1, seed=5)
        assert [r.config for r in t1] == [r.config for r in t2]

    def test_t3_blocks(self):
        reports = reproduce_table("T3", M=1, seed=5)
        labels = [r.config.scenario.label for r in reports]
        assert labels == ["none", "ll(1,0.1)@0.1", "ll(4,10)@0.1",
                          "uniform(0,20)@0.1", "pointmass(50)@0.1"]
        assert all(r.config.n == 25 for r in reports)
        assert all(r.config.truth.beta == 10.0 for r in reports)

    def test_unknown_table(self):
        with pytest.raises(ValueError):
            reproduce_table("T9", M=1)


@pytest.fixture(scope="module")
def reports():
    cfg = SimulationConfig(n=10, M=5, truth=LLParams(1.0, 2.0), seed=31)
    return [run_monte_carlo(cfg)]


class TestReportSerialization:
    def test_json_round_trip(self, reports, tmp_path):
        path = tmp_path / "out.json"
        write_reports_json(reports, path)
        loaded = json.loads(path.read_text())
        assert loaded == [report_to_dict(r) for r in reports]
        cell = loaded[0]["cells"]["rm"]["beta"]
        assert set(cell) == {"bias", "rmse", "count"}

    def test_csv_layout(self, reports, tmp_path):
        path = tmp_path / "out.csv"
        write_reports_csv(reports, path)
        lines = path.read_text().strip().splitlines()
        header = lines[0].split(",")
        assert header[:6] == ["scenario", "n", "alpha_true", "beta_true",
                              "parameter", "statistic"]
        assert header[6:] == list(reports[0].config.methods)
        # 4 statistic rows plus a failures row per report
        assert len(lines) == 1 + 5 * len(reports)
