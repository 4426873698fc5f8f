"""Evolutionary bi-objective optimization on unbounded integer lattices."""

from .bounds import (
    BoundInputs,
    PhaseBounds,
    bound_exp_tail_shape,
    bound_lemma_phase_terms,
    bound_power_law,
    bound_unit_step,
    ezz_constant,
)
from .core import (
    BenchmarkConfig,
    InvariantReport,
    ObjectiveValue,
    Point,
    brute_force_front,
    check_lemma_invariants,
    evaluate_f,
    is_on_front,
    pareto_front,
    pareto_set_member,
    strictly_dominates,
    weakly_dominates,
)
from .experiments import (
    CellResult,
    CellStats,
    MutationSpec,
    ScenarioSpec,
    derive_stream_id,
    read_aggregate_csv,
    read_results_csv,
    run_scenario,
    scenario_one_grid,
    scenario_two_grid,
    summarize,
    write_aggregate_csv,
    write_results_csv,
    x0_for,
)
from .moea import (
    AlgorithmKind,
    Archive,
    InvariantViolation,
    RunConfig,
    RunOutcome,
    RunRecord,
    archive_update,
    mutate,
    run,
    run_details,
    run_reference,
    run_with_invariant_checks,
)
from .samplers import (
    BilateralGeometric,
    MutationLaw,
    PowerLaw,
    RandomStream,
    UnitStep,
    chi_square_gof,
    pmf,
    sample,
    sample_many,
    truncated_expectation,
    truncated_expectation_lower_bound,
    zeta,
)

__version__ = "0.1.0"
