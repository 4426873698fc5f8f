"""Domain types and exact structure of the two-target integer benchmark.

The benchmark maps a point x in Z^n to the pair of L1 distances to the two
targets (a, 0, ..., 0) and (-a, 0, ..., 0):

    f(x) = (|x_1 - a| + sum_{i>=2} |x_i|,  |x_1 + a| + sum_{i>=2} |x_i|)

Both objectives are minimized.  The optimal objective values form the line
segment {(k, 2a - k) : k in [0, 2a]} and are attained exactly by the points
(k, 0, ..., 0) with |k| <= a.

Dominance predicates are written for the bi-objective case; the general
d-objective definition (componentwise <= for weak dominance, plus at least
one strict inequality for strict dominance) specializes to these for d = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

# Hard cap on the number of lattice points brute_force_front will enumerate.
ENUMERATION_BUDGET = 3_000_000


@dataclass(frozen=True)
class BenchmarkConfig:
    """Problem instance: front half-width ``a`` and dimension ``n``."""

    a: int
    n: int

    def __post_init__(self) -> None:
        if self.a < 0:
            raise ValueError(f"front half-width a must be >= 0, got {self.a}")
        if self.n < 2:
            raise ValueError(f"dimension n must be >= 2, got {self.n}")
        if 2 * self.a + 1 > INT64_MAX:
            raise OverflowError("2a+1 does not fit in a signed 64-bit integer")

    @property
    def front_size(self) -> int:
        return 2 * self.a + 1


@dataclass(frozen=True)
class Point:
    """An individual: an integer vector of length n >= 2.

    Coordinates must fit in a signed 64-bit integer; construction fails
    otherwise so that downstream arithmetic can rely on the range.
    """

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) < 2:
            raise ValueError("a point needs at least 2 coordinates")
        for c in self.coords:
            if not (INT64_MIN <= c <= INT64_MAX):
                raise OverflowError(f"coordinate {c} outside signed 64-bit range")

    def __len__(self) -> int:
        return len(self.coords)

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self.coords)

    @staticmethod
    def of(*coords: int) -> "Point":
        return Point(tuple(int(c) for c in coords))


@dataclass(frozen=True)
class ObjectiveValue:
    """A pair of non-negative objective values (both minimized)."""

    f1: int
    f2: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.f1, self.f2)


def evaluate_f(cfg: BenchmarkConfig, x: Point) -> ObjectiveValue:
    """Evaluate the benchmark at ``x``.

    Raises ValueError on a dimension mismatch and OverflowError if either
    objective would exceed the signed 64-bit range.
    """
    if len(x) != cfg.n:
        raise ValueError(f"point has {len(x)} coordinates, config expects {cfg.n}")
    tail = sum(abs(c) for c in x.coords[1:])
    f1 = abs(x.coords[0] - cfg.a) + tail
    f2 = abs(x.coords[0] + cfg.a) + tail
    if f1 > INT64_MAX or f2 > INT64_MAX:
        raise OverflowError("objective value exceeds signed 64-bit range")
    return ObjectiveValue(f1, f2)


def weakly_dominates(u: ObjectiveValue, v: ObjectiveValue) -> bool:
    """True iff u is componentwise at most v."""
    return u.f1 <= v.f1 and u.f2 <= v.f2


def strictly_dominates(u: ObjectiveValue, v: ObjectiveValue) -> bool:
    """True iff u weakly dominates v and differs in at least one component."""
    return weakly_dominates(u, v) and (u.f1 < v.f1 or u.f2 < v.f2)


def pareto_front(cfg: BenchmarkConfig) -> set[ObjectiveValue]:
    """The exact set of optimal objective values: {(k, 2a-k) : k in [0, 2a]}."""
    return {ObjectiveValue(k, 2 * cfg.a - k) for k in range(2 * cfg.a + 1)}


def is_on_front(cfg: BenchmarkConfig, v: ObjectiveValue) -> bool:
    """Membership test for the optimal objective set.

    Any value produced by the benchmark satisfies f1 + f2 >= 2a, with
    equality exactly on the front, so the sum test is an O(1) equivalent of
    a set lookup.
    """
    return v.f1 + v.f2 == 2 * cfg.a


def pareto_set_member(cfg: BenchmarkConfig, x: Point) -> Optional[int]:
    """Return k if x = (k, 0, ..., 0) with |k| <= a, else None."""
    if len(x) != cfg.n:
        raise ValueError(f"point has {len(x)} coordinates, config expects {cfg.n}")
    k = x.coords[0]
    if abs(k) > cfg.a:
        return None
    if any(c != 0 for c in x.coords[1:]):
        return None
    return k


def brute_force_front(cfg: BenchmarkConfig, box_radius: int) -> set[ObjectiveValue]:
    """Independent oracle: the non-dominated objective values over a box.

    Enumerates every point of [-box_radius, box_radius]^n, evaluates f, and
    filters strictly dominated values by pairwise comparison.  Requires
    n <= 4 and box_radius >= a + 1; outside the box f is coordinatewise
    monotone in each |x_i|, so the box already contains a preimage of every
    optimal value and no external point can dominate a box value.
    """
    if cfg.n > 4:
        raise ValueError("brute-force enumeration is limited to n <= 4")
    if box_radius < cfg.a + 1:
        raise ValueError(
            f"box_radius must be >= a+1 = {cfg.a + 1} to contain the optimal set"
        )
    width = 2 * box_radius + 1
    if width**cfg.n > ENUMERATION_BUDGET:
        raise ValueError(
            f"enumeration budget exceeded: {width}^{cfg.n} > {ENUMERATION_BUDGET}"
        )
    values = {
        evaluate_f(cfg, Point(coords))
        for coords in product(range(-box_radius, box_radius + 1), repeat=cfg.n)
    }
    return {
        v for v in values if not any(strictly_dominates(u, v) for u in values)
    }


# Names of the structural population invariants, used in reports and in
# engine diagnostics.
INV_ONE_UPPER_BOUNDARY = "at_most_one_member_with_x1_at_least_a"
INV_ONE_LOWER_BOUNDARY = "at_most_one_member_with_x1_at_most_minus_a"
INV_UNIQUE_INTERIOR = "at_most_one_member_per_x1_value_inside"
INV_SIZE_CAP = "population_size_at_most_2a_plus_1"
INV_INCOMPARABLE = "members_mutually_incomparable"
INV_MIN_NORM = "min_l1_norm_never_increases"
INV_COVERAGE = "covered_front_values_never_decrease"


@dataclass(frozen=True)
class InvariantReport:
    """Pass/fail record for the structural population invariants."""

    one_upper_boundary: bool
    one_lower_boundary: bool
    unique_interior: bool
    size_within_cap: bool
    mutually_incomparable: bool
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_lemma_invariants(
    cfg: BenchmarkConfig, archive_points: Sequence[Point] | Iterable[Point]
) -> InvariantReport:
    """Check the structural invariants of a mutually non-dominated archive.

    Verified facts: at most one member with x1 >= a, at most one with
    x1 <= -a, at most one member per x1 value in [-a, a], total size at
    most 2a+1, and pairwise incomparability of the objective values.
    """
    points = list(archive_points)
    a = cfg.a
    failures: list[str] = []

    n_upper = sum(1 for p in points if p.coords[0] >= a)
    n_lower = sum(1 for p in points if p.coords[0] <= -a)
    one_upper = n_upper <= 1
    one_lower = n_lower <= 1
    if not one_upper:
        failures.append(f"{INV_ONE_UPPER_BOUNDARY}: found {n_upper}")
    if not one_lower:
        failures.append(f"{INV_ONE_LOWER_BOUNDARY}: found {n_lower}")

    inside_counts: dict[int, int] = {}
    for p in points:
        x1 = p.coords[0]
        if -a <= x1 <= a:
            inside_counts[x1] = inside_counts.get(x1, 0) + 1
    duplicated = sorted(k for k, c in inside_counts.items() if c > 1)
    unique_interior = not duplicated
    if duplicated:
        failures.append(f"{INV_UNIQUE_INTERIOR}: duplicated x1 values {duplicated}")

    size_ok = len(points) <= 2 * a + 1
    if not size_ok:
        failures.append(f"{INV_SIZE_CAP}: size {len(points)} > {2 * a + 1}")

    objs = [evaluate_f(cfg, p) for p in points]
    incomparable = True
    for i in range(len(objs)):
        for j in range(len(objs)):
            if i != j and weakly_dominates(objs[i], objs[j]):
                incomparable = False
                failures.append(
                    f"{INV_INCOMPARABLE}: member {i} {objs[i].as_tuple()} "
                    f"dominates member {j} {objs[j].as_tuple()}"
                )
                break
        if not incomparable:
            break

    return InvariantReport(
        one_upper_boundary=one_upper,
        one_lower_boundary=one_lower,
        unique_interior=unique_interior,
        size_within_cap=size_ok,
        mutually_incomparable=incomparable,
        failures=tuple(failures),
    )
