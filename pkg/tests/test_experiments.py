import math
from pathlib import Path

import pytest

from intmoea.experiments import (
    AGGREGATE_CSV_HEADER,
    RUN_CSV_HEADER,
    CellResult,
    MutationSpec,
    RunRow,
    ScenarioSpec,
    derive_stream_id,
    read_aggregate_csv,
    read_results_csv,
    run_rows,
    run_scenario,
    scenario_one_grid,
    scenario_two_grid,
    summarize,
    write_aggregate_csv,
    write_results_csv,
    write_run_rows_csv,
    x0_for,
)
from intmoea.moea import AlgorithmKind, RunRecord


def rec(p1, p2, completed=True, seed=0, stream=0):
    return RunRecord(p1, p2, p1 + p2, completed, seed, stream)


class TestSummarize:
    def test_identical_records_have_zero_sd(self):
        stats = summarize([rec(5, 7)] * 4)
        assert stats.mean_total == 12
        assert stats.sd_pct_total == 0.0
        assert not stats.single_run_sd

    def test_two_value_example(self):
        stats = summarize([rec(5, 5), rec(10, 10)])
        assert stats.mean_total == 15
        # sample sd of {10, 20} is sqrt(50); in percent of the mean
        assert stats.sd_pct_total == pytest.approx(100 * math.sqrt(50) / 15, rel=1e-12)
        assert stats.sd_pct_total == pytest.approx(47.14, abs=0.01)

    def test_single_record_flagged(self):
        stats = summarize([rec(3, 4)])
        assert stats.sd_pct_total == 0.0
        assert stats.single_run_sd

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


class TestSpecs:
    def test_scenario_one_grid(self):
        spec = scenario_one_grid()
        assert spec.scenario == 1
        assert spec.a_values == (200,)
        kinds = [m.kind for m in spec.law_grid]
        assert kinds == ["unit"] + ["geom"] * 7 + ["powerlaw"]
        assert [m.inv_q for m in spec.law_grid if m.kind == "geom"] == [
            5, 10, 20, 50, 100, 200, 500,
        ]
        assert spec.runs_per_cell == 50
        assert spec.algorithm is AlgorithmKind.GSEMO

    def test_scenario_two_grid(self):
        spec = scenario_two_grid()
        assert spec.a_values == tuple(range(20, 201, 20))
        assert len(spec.a_values) == 10
        assert spec.a_values[0] == 20 and spec.a_values[-1] == 200
        geom = [m for m in spec.law_grid if m.kind == "geom"][0]
        assert geom.resolved_inv_q(100) == 25  # 1/q = a/4
        assert geom.law(100).q == pytest.approx(4 / 100)

    def test_x0_rule(self):
        assert x0_for(20, 2).coords == (0, 2000)
        assert x0_for(200, 4).coords == (0, 20000, 0, 0)

    def test_mutation_spec_validation(self):
        with pytest.raises(ValueError):
            MutationSpec("geom")
        with pytest.raises(ValueError):
            MutationSpec("geom", inv_q=5, inv_q_per_a=0.25)
        with pytest.raises(ValueError):
            MutationSpec("powerlaw")
        with pytest.raises(ValueError):
            MutationSpec("gauss")

    def test_scenario_spec_validation(self):
        with pytest.raises(ValueError):
            ScenarioSpec(1, 2, (), (MutationSpec("unit"),))
        with pytest.raises(ValueError):
            ScenarioSpec(1, 2, (5,), (MutationSpec("unit"),), runs_per_cell=0)

    def test_cell_enumeration_order(self):
        spec = scenario_two_grid()
        cells = spec.cells()
        assert [c[0] for c in cells] == list(range(30))
        assert cells[0][1] == 20 and cells[-1][1] == 200


class TestStreamDerivation:
    def test_deterministic(self):
        assert derive_stream_id(1, 2, 3) == derive_stream_id(1, 2, 3)

    def test_distinct_across_grid(self):
        ids = {
            derive_stream_id(99, c, r) for c in range(40) for r in range(50)
        }
        assert len(ids) == 2000

    def test_sensitive_to_all_arguments(self):
        base = derive_stream_id(5, 1, 1)
        assert derive_stream_id(6, 1, 1) != base
        assert derive_stream_id(5, 2, 1) != base
        assert derive_stream_id(5, 1, 2) != base

    def test_in_u64_range(self):
        v = derive_stream_id(2**63, 10**6, 49)
        assert 0 <= v < 2**64


def tiny_spec(runs=3, base_seed=777, max_evaluations=10**9):
    return ScenarioSpec(
        scenario=2,
        n=2,
        a_values=(5, 8),
        law_grid=(
            MutationSpec("unit"),
            MutationSpec("geom", inv_q_per_a=0.25),
            MutationSpec("powerlaw", beta=1.5),
        ),
        runs_per_cell=runs,
        base_seed=base_seed,
        max_evaluations=max_evaluations,
    )


class TestRunScenario:
    def test_deterministic_across_parallelism(self, tmp_path: Path):
        r1 = run_scenario(tiny_spec(), parallelism=1)
        r4 = run_scenario(tiny_spec(), parallelism=4)
        assert r1 == r4
        f1, f4 = tmp_path / "p1.csv", tmp_path / "p4.csv"
        write_results_csv(f1, r1)
        write_results_csv(f4, r4)
        assert f1.read_bytes() == f4.read_bytes()

    def test_phase_sums_and_bounds(self):
        results = run_scenario(tiny_spec())
        for cell in results:
            for r in cell.records:
                assert r.phase1_evals + r.phase2_evals == r.total_evals
            if cell.mutation.kind in ("unit", "powerlaw"):
                assert cell.bound_total is not None
                assert cell.stats.mean_total <= cell.bound_total
            else:
                assert cell.bound_total is None

    def test_degraded_cells_reported(self):
        results = run_scenario(tiny_spec(max_evaluations=20))
        assert all(cell.degraded for cell in results)
        assert all(not r.completed for cell in results for r in cell.records)

    def test_all_runs_complete_normally(self):
        results = run_scenario(tiny_spec())
        assert not any(cell.degraded for cell in results)
        assert all(r.completed for cell in results for r in cell.records)


class TestCsv:
    def test_run_csv_round_trip(self, tmp_path: Path):
        results = run_scenario(tiny_spec())
        path = tmp_path / "runs.csv"
        write_results_csv(path, results)
        rows = read_results_csv(path)
        assert rows == run_rows(results)
        # re-serialize and compare bytes
        path2 = tmp_path / "runs2.csv"
        write_run_rows_csv(path2, rows)
        assert path.read_bytes() == path2.read_bytes()

    def test_large_round_trip(self, tmp_path: Path):
        rows = [
            RunRow(1, "gsemo", "geom", 50.0, 200, 2, i, 7, 10**18 + i, 3 + i,
                   4 + i, 7 + 2 * i, True)
            for i in range(1000)
        ]
        path = tmp_path / "big.csv"
        write_run_rows_csv(path, rows)
        assert read_results_csv(path) == rows

    def test_wrong_header_names_missing_column(self, tmp_path: Path):
        path = tmp_path / "bad.csv"
        header = RUN_CSV_HEADER.replace("stream_id,", "")
        path.write_text(header + "\n", encoding="utf-8")
        with pytest.raises(ValueError, match="stream_id"):
            read_results_csv(path)

    def test_empty_results_header_only(self, tmp_path: Path):
        path = tmp_path / "empty.csv"
        write_run_rows_csv(path, [])
        assert path.read_text(encoding="utf-8") == RUN_CSV_HEADER + "\n"
        assert read_results_csv(path) == []

    def test_lf_line_endings(self, tmp_path: Path):
        path = tmp_path / "lf.csv"
        write_results_csv(path, run_scenario(tiny_spec(runs=1)))
        data = path.read_bytes()
        assert b"\r" not in data

    def test_aggregate_round_trip(self, tmp_path: Path):
        results = run_scenario(tiny_spec())
        path = tmp_path / "agg.csv"
        write_aggregate_csv(path, results)
        rows = read_aggregate_csv(path)
        assert len(rows) == len(results)
        header = path.read_text(encoding="utf-8").splitlines()[0]
        assert header == AGGREGATE_CSV_HEADER
        for row, cell in zip(rows, results):
            assert row.mutation == cell.mutation.kind
            assert row.runs == cell.stats.run_count
            # values survive the 6-significant-digit format
            assert row.mean_total == pytest.approx(cell.stats.mean_total, rel=1e-5)
            if cell.bound_total is None:
                assert row.bound_total is None
            else:
                assert row.bound_total == pytest.approx(cell.bound_total, rel=1e-5)

    def test_aggregate_missing_column_error(self, tmp_path: Path):
        path = tmp_path / "badagg.csv"
        path.write_text(AGGREGATE_CSV_HEADER.replace(",bound_total", "") + "\n")
        with pytest.raises(ValueError, match="bound_total"):
            read_aggregate_csv(path)
