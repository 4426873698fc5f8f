"""Scenario harness: seeded run grids, aggregation, and CSV persistence.

Scenario 1 sweeps the mutation operator at fixed instance size; scenario 2
sweeps the front half-width a for the three operators, with the geometric
step size tied to a (1/q = a/4).  Every cell executes ``runs_per_cell``
independent runs started at x0 = (0, 100a, 0, ..., 0).

Runs are addressed, not sequenced: the stream id of run j of cell i is
derived from (base_seed, i, j) by a splitmix64 chain (see
``derive_stream_id``), so results are reproducible at any parallelism
level and any execution order.

CSV schemas (UTF-8, comma-separated, header row, LF endings; integers in
decimal, reals with 6 significant digits; param is 1/q for the geometric
law, beta for the power law, empty for unit steps):

per-run rows
    scenario,algo,mutation,param,a,n,run_index,seed,stream_id,
    phase1_evals,phase2_evals,total_evals,completed

aggregate rows
    scenario,algo,mutation,param,a,n,runs,mean_p1,sdpct_p1,mean_p2,
    sdpct_p2,mean_total,sdpct_total,bound_total

``bound_total`` is the certified ceiling for unit-step and power-law
cells and empty for geometric cells, whose bound constant is existential.
"""

from __future__ import annotations

import csv
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .bounds import BoundInputs, bound_power_law, bound_unit_step
from .core import BenchmarkConfig, Point
from .moea import DEFAULT_MAX_EVALUATIONS, AlgorithmKind, RunConfig, RunRecord, run
from .samplers import BilateralGeometric, MutationLaw, PowerLaw, UnitStep

logger = logging.getLogger(__name__)

_U64 = (1 << 64) - 1

DEFAULT_BASE_SEED = 20_240_817
SCENARIO_ONE_INV_Q = (5, 10, 20, 50, 100, 200, 500)
SCENARIO_TWO_A_VALUES = tuple(range(20, 201, 20))
DEFAULT_BETA = 1.5


@dataclass(frozen=True)
class MutationSpec:
    """Cell-level description of a mutation law, possibly tied to a.

    kind is one of "unit", "geom", "powerlaw".  Geometric cells carry
    either a fixed step size ``inv_q`` or ``inv_q_per_a`` so that
    1/q = inv_q_per_a * a (scenario 2 uses 0.25, i.e. 1/q = a/4).
    """

    kind: str
    inv_q: Optional[float] = None
    inv_q_per_a: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("unit", "geom", "powerlaw"):
            raise ValueError(f"unknown mutation kind {self.kind!r}")
        if self.kind == "geom":
            if (self.inv_q is None) == (self.inv_q_per_a is None):
                raise ValueError("geom needs exactly one of inv_q / inv_q_per_a")
        elif self.kind == "powerlaw":
            if self.beta is None:
                raise ValueError("powerlaw needs beta")

    def resolved_inv_q(self, a: int) -> float:
        if self.inv_q is not None:
            return self.inv_q
        return self.inv_q_per_a * a

    def law(self, a: int) -> MutationLaw:
        if self.kind == "unit":
            return UnitStep()
        if self.kind == "geom":
            return BilateralGeometric(q=1.0 / self.resolved_inv_q(a))
        return PowerLaw(beta=self.beta)

    def param_value(self, a: int) -> Optional[float]:
        """The value recorded in the CSV param column."""
        if self.kind == "geom":
            return self.resolved_inv_q(a)
        if self.kind == "powerlaw":
            return self.beta
        return None


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: int
    n: int
    a_values: tuple[int, ...]
    law_grid: tuple[MutationSpec, ...]
    runs_per_cell: int = 50
    algorithm: AlgorithmKind = AlgorithmKind.GSEMO
    base_seed: int = DEFAULT_BASE_SEED
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS

    def __post_init__(self) -> None:
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be >= 1")
        if not self.a_values:
            raise ValueError("a_values must be non-empty")

    def cells(self) -> list[tuple[int, int, MutationSpec]]:
        """(cell_index, a, law spec) in deterministic enumeration order."""
        out = []
        idx = 0
        for a in self.a_values:
            for law in self.law_grid:
                out.append((idx, a, law))
                idx += 1
        return out


def x0_for(a: int, n: int) -> Point:
    """Start-point rule shared by all scenarios: second coordinate 100a."""
    coords = [0] * n
    coords[1] = 100 * a
    return Point(tuple(coords))


def scenario_one_grid(
    n: int = 2,
    a: int = 200,
    runs_per_cell: int = 50,
    base_seed: int = DEFAULT_BASE_SEED,
) -> ScenarioSpec:
    """Operator sweep at fixed a: unit, seven geometric step sizes, power law."""
    laws = (
        (MutationSpec("unit"),)
        + tuple(MutationSpec("geom", inv_q=v) for v in SCENARIO_ONE_INV_Q)
        + (MutationSpec("powerlaw", beta=DEFAULT_BETA),)
    )
    return ScenarioSpec(
        scenario=1,
        n=n,
        a_values=(a,),
        law_grid=laws,
        runs_per_cell=runs_per_cell,
        base_seed=base_seed,
    )


def scenario_two_grid(
    n: int = 2,
    runs_per_cell: int = 50,
    base_seed: int = DEFAULT_BASE_SEED,
) -> ScenarioSpec:
    """Scaling sweep a = 20, 40, ..., 200 with 1/q tied to a/4."""
    laws = (
        MutationSpec("unit"),
        MutationSpec("geom", inv_q_per_a=0.25),
        MutationSpec("powerlaw", beta=DEFAULT_BETA),
    )
    return ScenarioSpec(
        scenario=2,
        n=n,
        a_values=SCENARIO_TWO_A_VALUES,
        law_grid=laws,
        runs_per_cell=runs_per_cell,
        base_seed=base_seed,
    )


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _U64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _U64
    return x ^ (x >> 31)


def derive_stream_id(base_seed: int, cell_index: int, run_index: int) -> int:
    """Run-addressed stream id: splitmix64(splitmix64(splitmix64(seed) ^ cell) ^ run).

    Pure function of its three arguments, hence independent of execution
    order and parallelism.
    """
    h = _splitmix64(base_seed & _U64)
    h = _splitmix64(h ^ (cell_index & _U64))
    h = _splitmix64(h ^ (run_index & _U64))
    return h


@dataclass(frozen=True)
class CellStats:
    """Means and Bessel-corrected sample deviations (as percent of mean)."""

    mean_phase1: float
    mean_phase2: float
    mean_total: float
    sd_pct_phase1: float
    sd_pct_phase2: float
    sd_pct_total: float
    run_count: int
    single_run_sd: bool = False


def summarize(records: Sequence[RunRecord]) -> CellStats:
    if not records:
        raise ValueError("cannot summarize an empty run set")
    p1 = [r.phase1_evals for r in records]
    p2 = [r.phase2_evals for r in records]
    tot = [r.total_evals for r in records]
    single = len(records) == 1

    def sd_pct(xs: list[int]) -> float:
        if single:
            return 0.0
        m = statistics.fmean(xs)
        if m == 0.0:
            return 0.0
        return 100.0 * statistics.stdev(xs) / m

    return CellStats(
        mean_phase1=statistics.fmean(p1),
        mean_phase2=statistics.fmean(p2),
        mean_total=statistics.fmean(tot),
        sd_pct_phase1=sd_pct(p1),
        sd_pct_phase2=sd_pct(p2),
        sd_pct_total=sd_pct(tot),
        run_count=len(records),
        single_run_sd=single,
    )


@dataclass(frozen=True)
class CellResult:
    scenario: int
    algorithm: AlgorithmKind
    cell_index: int
    mutation: MutationSpec
    a: int
    n: int
    stats: CellStats
    records: tuple[RunRecord, ...]
    bound_total: Optional[float]
    degraded: bool


def _cell_bound(spec: ScenarioSpec, mut: MutationSpec, a: int) -> Optional[float]:
    x0_norm = 100 * a
    if mut.kind == "unit":
        return bound_unit_step(BoundInputs(spec.algorithm, spec.n, a, x0_norm))
    if mut.kind == "powerlaw":
        return bound_power_law(
            BoundInputs(spec.algorithm, spec.n, a, x0_norm, beta=mut.beta)
        )
    return None


def run_scenario(spec: ScenarioSpec, parallelism: int = 1) -> list[CellResult]:
    """Execute every cell of the scenario; deterministic in spec alone.

    Any run that exhausts the evaluation cap marks its cell degraded and
    is reported in the results rather than dropped.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    cells = spec.cells()

    def one_run(args: tuple[int, int, MutationSpec, int]) -> RunRecord:
        cell_index, a, mut, run_index = args
        cfg = RunConfig(
            algorithm=spec.algorithm,
            law=mut.law(a),
            benchmark=BenchmarkConfig(a=a, n=spec.n),
            x0=x0_for(a, spec.n),
            seed=spec.base_seed,
            stream_id=derive_stream_id(spec.base_seed, cell_index, run_index),
            max_evaluations=spec.max_evaluations,
        )
        return run(cfg)

    tasks = [
        (cell_index, a, mut, run_index)
        for cell_index, a, mut in cells
        for run_index in range(spec.runs_per_cell)
    ]
    if parallelism == 1:
        records = [one_run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(one_run, tasks))

    results: list[CellResult] = []
    for cell_index, a, mut in cells:
        cell_records = tuple(
            records[cell_index * spec.runs_per_cell + j]
            for j in range(spec.runs_per_cell)
        )
        degraded = any(not r.completed for r in cell_records)
        if degraded:
            logger.warning(
                "cell %d (a=%d, %s) hit the evaluation cap in %d/%d runs",
                cell_index, a, mut.kind,
                sum(1 for r in cell_records if not r.completed), len(cell_records),
            )
        results.append(
            CellResult(
                scenario=spec.scenario,
                algorithm=spec.algorithm,
                cell_index=cell_index,
                mutation=mut,
                a=a,
                n=spec.n,
                stats=summarize(cell_records),
                records=cell_records,
                bound_total=_cell_bound(spec, mut, a),
                degraded=degraded,
            )
        )
    return results


RUN_CSV_HEADER = (
    "scenario,algo,mutation,param,a,n,run_index,seed,stream_id,"
    "phase1_evals,phase2_evals,total_evals,completed"
)
AGGREGATE_CSV_HEADER = (
    "scenario,algo,mutation,param,a,n,runs,mean_p1,sdpct_p1,mean_p2,"
    "sdpct_p2,mean_total,sdpct_total,bound_total"
)


def _fmt_real(v: Optional[float]) -> str:
    return "" if v is None else format(v, ".6g")


@dataclass(frozen=True)
class RunRow:
    """One parsed line of the per-run CSV."""

    scenario: int
    algo: str
    mutation: str
    param: Optional[float]
    a: int
    n: int
    run_index: int
    seed: int
    stream_id: int
    phase1_evals: int
    phase2_evals: int
    total_evals: int
    completed: bool


@dataclass(frozen=True)
class AggregateRow:
    """One parsed line of the aggregate CSV."""

    scenario: int
    algo: str
    mutation: str
    param: Optional[float]
    a: int
    n: int
    runs: int
    mean_p1: float
    sdpct_p1: float
    mean_p2: float
    sdpct_p2: float
    mean_total: float
    sdpct_total: float
    bound_total: Optional[float]


def run_rows(results: Sequence[CellResult]) -> list[RunRow]:
    rows = []
    for cell in results:
        param = cell.mutation.param_value(cell.a)
        for j, rec in enumerate(cell.records):
            rows.append(
                RunRow(
                    scenario=cell.scenario,
                    algo=cell.algorithm.value,
                    mutation=cell.mutation.kind,
                    param=param,
                    a=cell.a,
                    n=cell.n,
                    run_index=j,
                    seed=rec.seed,
                    stream_id=rec.stream_id,
                    phase1_evals=rec.phase1_evals,
                    phase2_evals=rec.phase2_evals,
                    total_evals=rec.total_evals,
                    completed=rec.completed,
                )
            )
    return rows


def write_results_csv(path: str | Path, results: Sequence[CellResult]) -> None:
    """Write the per-run CSV for the given cell results."""
    write_run_rows_csv(path, run_rows(results))


def write_run_rows_csv(path: str | Path, rows: Sequence[RunRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RUN_CSV_HEADER.split(","))
        for r in rows:
            w.writerow(
                [
                    r.scenario,
                    r.algo,
                    r.mutation,
                    _fmt_real(r.param),
                    r.a,
                    r.n,
                    r.run_index,
                    r.seed,
                    r.stream_id,
                    r.phase1_evals,
                    r.phase2_evals,
                    r.total_evals,
                    "true" if r.completed else "false",
                ]
            )


def _check_header(expected: str, actual: list[str], path: str | Path) -> None:
    want = expected.split(",")
    if actual == want:
        return
    missing = [c for c in want if c not in actual]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")
    raise ValueError(f"{path}: unexpected header {actual}")


def read_results_csv(path: str | Path) -> list[RunRow]:
    """Parse a per-run CSV; raises ValueError naming any missing column."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row")
        _check_header(RUN_CSV_HEADER, header, path)
        rows = []
        for rec in reader:
            rows.append(
                RunRow(
                    scenario=int(rec[0]),
                    algo=rec[1],
                    mutation=rec[2],
                    param=float(rec[3]) if rec[3] else None,
                    a=int(rec[4]),
                    n=int(rec[5]),
                    run_index=int(rec[6]),
                    seed=int(rec[7]),
                    stream_id=int(rec[8]),
                    phase1_evals=int(rec[9]),
                    phase2_evals=int(rec[10]),
                    total_evals=int(rec[11]),
                    completed=rec[12] == "true",
                )
            )
    return rows


def write_aggregate_csv(path: str | Path, results: Sequence[CellResult]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AGGREGATE_CSV_HEADER.split(","))
        for cell in results:
            s = cell.stats
            w.writerow(
                [
                    cell.scenario,
                    cell.algorithm.value,
                    cell.mutation.kind,
                    _fmt_real(cell.mutation.param_value(cell.a)),
                    cell.a,
                    cell.n,
                    s.run_count,
                    _fmt_real(s.mean_phase1),
                    _fmt_real(s.sd_pct_phase1),
                    _fmt_real(s.mean_phase2),
                    _fmt_real(s.sd_pct_phase2),
                    _fmt_real(s.mean_total),
                    _fmt_real(s.sd_pct_total),
                    _fmt_real(cell.bound_total),
                ]
            )


def read_aggregate_csv(path: str | Path) -> list[AggregateRow]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row")
        _check_header(AGGREGATE_CSV_HEADER, header, path)
        rows = []
        for rec in reader:
            rows.append(
                AggregateRow(
                    scenario=int(rec[0]),
                    algo=rec[1],
                    mutation=rec[2],
                    param=float(rec[3]) if rec[3] else None,
                    a=int(rec[4]),
                    n=int(rec[5]),
                    runs=int(rec[6]),
                    mean_p1=float(rec[7]),
                    sdpct_p1=float(rec[8]),
                    mean_p2=float(rec[9]),
                    sdpct_p2=float(rec[10]),
                    mean_total=float(rec[11]),
                    sdpct_total=float(rec[12]),
                    bound_total=float(rec[13]) if rec[13] else None,
                )
            )
    return rows
