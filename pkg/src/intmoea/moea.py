"""Archive-based evolutionary loop: SEMO / GSEMO over integer lattices.

One iteration selects a parent uniformly from the archive, mutates it,
evaluates the offspring, then updates the archive: every member weakly
dominated by the offspring is dropped, and the offspring joins unless a
remaining member strictly dominates it.  In particular an offspring whose
objective value equals a member's replaces that member.

The runtime of a run is the number of function evaluations until the
archive's objective values cover the whole optimal front: 1 for the
initial individual plus one per iteration.  Equal individuals are
evaluated separately; nothing is cached across iterations.

``run`` executes on one of two compiled engines (``indexed`` is the fast
structured archive, ``scan`` the plain reference); both consume the
random stream identically and must produce identical trajectories.
``run_reference`` is a slow pure-Python mirror used as a cross-check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _engine, _kernels
from .core import (
    INV_COVERAGE,
    INV_INCOMPARABLE,
    INV_MIN_NORM,
    INV_ONE_LOWER_BOUNDARY,
    INV_ONE_UPPER_BOUNDARY,
    INV_SIZE_CAP,
    INV_UNIQUE_INTERIOR,
    BenchmarkConfig,
    ObjectiveValue,
    Point,
    evaluate_f,
    is_on_front,
    strictly_dominates,
    weakly_dominates,
)
from .samplers import MutationLaw, RandomStream, _law_code

DEFAULT_MAX_EVALUATIONS = 10**9

# mutation steps keep coordinates within this magnitude; beyond it a run
# aborts with an overflow error instead of wrapping
def coordinate_cap(n: int) -> int:
    return (2**62) // n


class AlgorithmKind(enum.Enum):
    SEMO = "semo"
    GSEMO = "gsemo"

    @staticmethod
    def from_string(name: str) -> "AlgorithmKind":
        return AlgorithmKind(name.lower())


class InvariantViolation(RuntimeError):
    """A structural population invariant failed during a checked run."""

    def __init__(self, invariant: str, iteration: int):
        super().__init__(f"invariant '{invariant}' violated at evaluation {iteration}")
        self.invariant = invariant
        self.iteration = iteration


_IV_NAMES = {
    _engine.IV_UPPER: INV_ONE_UPPER_BOUNDARY,
    _engine.IV_LOWER: INV_ONE_LOWER_BOUNDARY,
    _engine.IV_INTERIOR: INV_UNIQUE_INTERIOR,
    _engine.IV_SIZE: INV_SIZE_CAP,
    _engine.IV_COMPARABLE: INV_INCOMPARABLE,
    _engine.IV_MIN_NORM: INV_MIN_NORM,
    _engine.IV_COVERAGE: INV_COVERAGE,
}


@dataclass(frozen=True)
class RunConfig:
    algorithm: AlgorithmKind
    law: MutationLaw
    benchmark: BenchmarkConfig
    x0: Point
    seed: int
    stream_id: int = 0
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS

    def __post_init__(self) -> None:
        if len(self.x0) != self.benchmark.n:
            raise ValueError(
                f"x0 has {len(self.x0)} coordinates, benchmark expects {self.benchmark.n}"
            )
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")
        for name, value in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not (0 <= value < 2**64):
                raise ValueError(f"{name} must be an unsigned 64-bit integer")
        cap = coordinate_cap(self.benchmark.n)
        for c in self.x0.coords:
            if abs(c) > cap:
                raise OverflowError(
                    f"|x0 coordinate| {abs(c)} exceeds the engine cap {cap}"
                )


@dataclass(frozen=True)
class RunRecord:
    phase1_evals: int
    phase2_evals: int
    total_evals: int
    completed: bool
    seed: int
    stream_id: int


@dataclass(frozen=True)
class RunOutcome:
    """Record plus trajectory digest and final population, for comparisons."""

    record: RunRecord
    digest: int
    members: tuple[Point, ...]
    covered_count: int


class Archive:
    """Plain mutually non-dominated archive with front-coverage bookkeeping.

    The member list is insertion-ordered; removals swap the last member
    into the vacated position, applied in descending position order.  The
    compiled engines evolve their dense member order the same way, which
    is what makes trajectories comparable across implementations.
    """

    def __init__(self, benchmark: BenchmarkConfig):
        self.benchmark = benchmark
        self.members: list[tuple[Point, ObjectiveValue]] = []
        self.covered_front_flags = [False] * benchmark.front_size
        self.covered_count = 0

    def __len__(self) -> int:
        return len(self.members)

    def points(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.members)

    def update(self, y: Point, fy: Optional[ObjectiveValue] = None) -> bool:
        """Apply the archive update rule for offspring ``y``; True if inserted."""
        if fy is None:
            fy = evaluate_f(self.benchmark, y)
        marks = [
            i for i, (_, fz) in enumerate(self.members) if weakly_dominates(fy, fz)
        ]
        marked = set(marks)
        rejected = any(
            strictly_dominates(fz, fy)
            for i, (_, fz) in enumerate(self.members)
            if i not in marked
        )
        for i in reversed(marks):
            self.members[i] = self.members[-1]
            self.members.pop()
        if rejected:
            return False
        self.members.append((y, fy))
        if is_on_front(self.benchmark, fy) and not self.covered_front_flags[fy.f1]:
            self.covered_front_flags[fy.f1] = True
            self.covered_count += 1
        return True


def archive_update(archive: Archive, y: Point, fy: ObjectiveValue) -> Archive:
    """Functional-style wrapper over ``Archive.update``; returns the archive."""
    archive.update(y, fy)
    return archive


def mutate(
    kind: AlgorithmKind, law: MutationLaw, parent: Point, rng: np.random.Generator
) -> Point:
    """Produce one offspring of ``parent``.

    SEMO picks one component uniformly and adds one draw of the law; GSEMO
    adds an independent draw to each component with probability 1/n.  The
    offspring may equal the parent.  Parent coordinates must stay below
    2^62 in magnitude so the update cannot wrap.
    """
    for c in parent.coords:
        if abs(c) >= 2**62:
            raise OverflowError("parent coordinate too large to mutate safely")
    code, q, beta = _law_code(law)
    n = len(parent)
    arr = np.array(parent.coords, dtype=np.int64)
    out = np.empty(n, dtype=np.int64)
    _kernels.mutate_into(rng, arr, out, n, kind is AlgorithmKind.GSEMO, code, q, beta)
    return Point(tuple(int(v) for v in out))


def _run_engine(config: RunConfig, archive_impl: str, check_every: int) -> RunOutcome:
    engine = {
        "indexed": _engine.run_indexed,
        "scan": _engine.run_scan,
    }.get(archive_impl)
    if engine is None:
        raise ValueError(f"unknown archive_impl {archive_impl!r}")
    code, q, beta = _law_code(config.law)
    bm = config.benchmark
    x0 = np.array(config.x0.coords, dtype=np.int64)
    out_pts = np.zeros((2 * bm.a + 3, bm.n), dtype=np.int64)
    misc = np.zeros(_engine.MISC_LEN, dtype=np.int64)
    rng = RandomStream(config.seed, config.stream_id).generator()
    digest = engine(
        rng,
        config.algorithm is AlgorithmKind.GSEMO,
        code,
        q,
        beta,
        bm.a,
        bm.n,
        x0,
        config.max_evaluations,
        check_every,
        out_pts,
        misc,
    )
    err = int(misc[_engine.M_ERR])
    if err == _engine.ERR_OVERFLOW:
        raise OverflowError(
            f"coordinate update left the safe range at evaluation {misc[_engine.M_ERR_ITER]}"
        )
    if err == _engine.ERR_CAPACITY:
        raise InvariantViolation(INV_SIZE_CAP, int(misc[_engine.M_ERR_ITER]))
    if err >= 100:
        raise InvariantViolation(
            _IV_NAMES[err - 100], int(misc[_engine.M_ERR_ITER])
        )
    record = RunRecord(
        phase1_evals=int(misc[_engine.M_PHASE1]),
        phase2_evals=int(misc[_engine.M_PHASE2]),
        total_evals=int(misc[_engine.M_TOTAL]),
        completed=bool(misc[_engine.M_COMPLETED]),
        seed=config.seed,
        stream_id=config.stream_id,
    )
    count = int(misc[_engine.M_COUNT])
    members = tuple(
        Point(tuple(int(v) for v in out_pts[p])) for p in range(count)
    )
    return RunOutcome(
        record=record,
        digest=int(digest),
        members=members,
        covered_count=int(misc[_engine.M_COVERED]),
    )


def run(config: RunConfig, archive_impl: str = "indexed") -> RunRecord:
    """Execute one seeded run to full front coverage (or the safety cap)."""
    return _run_engine(config, archive_impl, check_every=0).record


def run_details(config: RunConfig, archive_impl: str = "indexed") -> RunOutcome:
    """Like ``run`` but returning the trajectory digest and final members."""
    return _run_engine(config, archive_impl, check_every=0)


def run_with_invariant_checks(
    config: RunConfig, check_every: int, archive_impl: str = "indexed"
) -> RunRecord:
    """Identical trajectory to ``run``, asserting invariants as it goes.

    Every ``check_every`` evaluations the engine re-derives the structural
    invariants from raw coordinates and verifies that the minimum L1 norm
    has not increased and covered front values have not been lost.  A
    failure raises InvariantViolation naming the broken invariant.
    """
    if check_every < 1:
        raise ValueError("check_every must be positive")
    return _run_engine(config, archive_impl, check_every=check_every).record


def run_reference(config: RunConfig) -> RunOutcome:
    """Pure-Python mirror of ``run`` over the plain ``Archive``.

    Consumes the generator exactly like the compiled engines (numba
    reproduces numpy Generator streams bit for bit) and computes the same
    trajectory digest, so outcomes are comparable field by field.  Slow;
    meant for small cross-checking runs.
    """
    bm = config.benchmark
    target = bm.front_size
    mask = (1 << 64) - 1
    digest = _engine.FNV_OFFSET

    def mix(h: int, v: int) -> int:
        return ((h ^ v) * _engine.FNV_PRIME) & mask

    rng = RandomStream(config.seed, config.stream_id).generator()
    archive = Archive(bm)
    evals = 1
    f0 = evaluate_f(bm, config.x0)
    hit = is_on_front(bm, f0)
    phase1 = evals if hit else 0
    archive.update(config.x0, f0)
    digest = mix(digest, f0.f1)
    digest = mix(digest, f0.f2)
    digest = mix(digest, len(archive))
    digest = mix(digest, archive.covered_count)
    ccap = coordinate_cap(bm.n)

    while archive.covered_count < target and evals < config.max_evaluations:
        idx = int(rng.integers(0, len(archive.members)))
        parent = archive.members[idx][0]
        y = mutate(config.algorithm, config.law, parent, rng)
        evals += 1
        if any(abs(c) > ccap for c in y.coords):
            # same checked-arithmetic behavior as the compiled engines
            raise OverflowError(
                f"coordinate update left the safe range at evaluation {evals}"
            )
        fy = evaluate_f(bm, y)
        if not hit and is_on_front(bm, fy):
            hit = True
            phase1 = evals
        accepted = archive.update(y, fy)
        digest = mix(digest, evals)
        digest = mix(digest, fy.f1)
        digest = mix(digest, fy.f2)
        digest = mix(digest, 1 if accepted else 0)
        digest = mix(digest, len(archive))
        digest = mix(digest, archive.covered_count)

    total = evals
    if not hit:
        phase1 = total
    record = RunRecord(
        phase1_evals=phase1,
        phase2_evals=total - phase1,
        total_evals=total,
        completed=archive.covered_count == target,
        seed=config.seed,
        stream_id=config.stream_id,
    )
    return RunOutcome(
        record=record,
        digest=digest,
        members=archive.points(),
        covered_count=archive.covered_count,
    )
