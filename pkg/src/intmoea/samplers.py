"""Integer mutation-strength laws: pmf evaluation, sampling, and moments.

Three symmetric laws over Z are supported:

* unit step: uniform on {-1, +1};
* bilateral geometric with parameter q in (0, 1):
  P[Z = k] = q/(2-q) * (1-q)^|k|;
* power law with exponent beta in (1, 2):
  P[Z = k] = |k|^(-beta) / (2 zeta(beta)) for k != 0, and P[Z = 0] = 0.

Sampling is exact for every admissible parameter.  Theory elsewhere in the
package additionally assumes q bounded away from 1 by a constant; that
assumption belongs to the bound evaluators, not to the sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from . import _kernels

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class UnitStep:
    """Uniform law on {-1, +1}."""


@dataclass(frozen=True)
class BilateralGeometric:
    """Symmetric integer law with exponential tails; q in (0, 1)."""

    q: float

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly in (0, 1), got {self.q}")


@dataclass(frozen=True)
class PowerLaw:
    """Symmetric zeta law with exponent beta, strictly between 1 and 2."""

    beta: float

    def __post_init__(self) -> None:
        if not (1.0 < self.beta < 2.0):
            raise ValueError(f"beta must lie strictly in (1, 2), got {self.beta}")

    @property
    def normalization(self) -> float:
        """2 * zeta(beta), cached across instances with equal beta."""
        return 2.0 * zeta(self.beta)


MutationLaw = Union[UnitStep, BilateralGeometric, PowerLaw]


@dataclass(frozen=True)
class RandomStream:
    """Addressable source of randomness: (seed, stream_id) -> generator.

    Identical (seed, stream_id) pairs reproduce identical draw sequences;
    distinct stream ids give statistically independent streams.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name, value in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not (0 <= value <= _U64_MAX):
                raise ValueError(f"{name} must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed, self.stream_id)))
        )


@lru_cache(maxsize=None)
def zeta(beta: float) -> float:
    """Riemann zeta at beta in (1, 2), absolute error below 1e-12.

    Direct summation of the first K terms plus an integral tail estimate,
    where the plain integral bracket [((K+1)^(1-beta))/(beta-1),
    (K^(1-beta))/(beta-1)] is tightened with Euler-Maclaurin correction
    terms; the remainder is below K^(-beta-5), i.e. < 1e-18 for K = 2000.
    """
    if not (1.0 < beta < 2.0):
        raise ValueError(f"beta must lie strictly in (1, 2), got {beta}")
    k_terms = 2000
    partial = float(np.sum(np.arange(1, k_terms, dtype=np.float64) ** (-beta)))
    k = float(k_terms)
    tail = (
        k ** (1.0 - beta) / (beta - 1.0)
        + 0.5 * k ** (-beta)
        + beta / 12.0 * k ** (-beta - 1.0)
        - beta * (beta + 1.0) * (beta + 2.0) / 720.0 * k ** (-beta - 3.0)
    )
    return partial + tail


def pmf(law: MutationLaw, k: int) -> float:
    """Probability of drawing exactly k under the law."""
    if isinstance(law, UnitStep):
        return 0.5 if k in (-1, 1) else 0.0
    if isinstance(law, BilateralGeometric):
        q = law.q
        return q / (2.0 - q) * (1.0 - q) ** abs(k)
    if isinstance(law, PowerLaw):
        if k == 0:
            return 0.0
        return abs(k) ** (-law.beta) / law.normalization
    raise TypeError(f"unknown law {law!r}")


def _law_code(law: MutationLaw) -> tuple[int, float, float]:
    """Map a law object to the (code, q, beta) triple the kernels expect."""
    if isinstance(law, UnitStep):
        return _kernels.LAW_UNIT, 0.0, 0.0
    if isinstance(law, BilateralGeometric):
        return _kernels.LAW_GEOM, law.q, 0.0
    if isinstance(law, PowerLaw):
        return _kernels.LAW_POWER, 0.0, law.beta
    raise TypeError(f"unknown law {law!r}")


def sample(law: MutationLaw, rng: np.random.Generator) -> int:
    """Draw one value distributed exactly per ``pmf(law, .)``."""
    code, q, beta = _law_code(law)
    return int(_kernels.sample_law(rng, code, q, beta))


def sample_many(law: MutationLaw, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` values; equivalent to ``size`` calls of ``sample``."""
    code, q, beta = _law_code(law)
    out = np.empty(size, dtype=np.int64)
    _kernels.sample_batch(rng, code, q, beta, out)
    return out


def truncated_expectation(q: float, z: int) -> float:
    """Closed form of E[Z * 1{0 <= Z <= z}] for the bilateral geometric law.

    Equals (1-q)/(q(2-q)) * (1 - (1-q)^z (1 + z q)), which matches the
    brute-force sum sum_{k=0}^{z} k * pmf(k) to 1e-12.
    """
    if not (0.0 < q < 1.0):
        raise ValueError(f"q must lie strictly in (0, 1), got {q}")
    if z < 0:
        raise ValueError(f"z must be non-negative, got {z}")
    return (1.0 - q) / (q * (2.0 - q)) * (1.0 - (1.0 - q) ** z * (1.0 + z * q))


def truncated_expectation_lower_bound(q: float, z: int, C: float) -> float:
    """Explicit lower bound K * min(z^2 q, 1/(4q)) with K = (1-C)/(4(2-C)).

    Valid whenever q <= C < 1; callers use it purely as a checkable
    inequality against ``truncated_expectation``.
    """
    if not (0.0 < C < 1.0):
        raise ValueError(f"C must lie strictly in (0, 1), got {C}")
    if not (0.0 < q <= C):
        raise ValueError(f"the bound requires 0 < q <= C, got q={q}, C={C}")
    if z < 0:
        raise ValueError(f"z must be non-negative, got {z}")
    K = 0.25 * (1.0 - C) / (2.0 - C)
    return K * min(z * z * q, 1.0 / (4.0 * q))


def total_mass_check(law: MutationLaw, half_window: int = 10**4) -> float:
    """Sum the pmf over [-K, K] plus an analytic bound on the tail mass.

    Returns a value that must equal 1 up to the tail-estimate error; used
    by the verification suite to confirm normalization.
    """
    if isinstance(law, UnitStep):
        return pmf(law, -1) + pmf(law, 1)
    body = sum(pmf(law, k) for k in range(-half_window, half_window + 1))
    if isinstance(law, BilateralGeometric):
        q = law.q
        # two geometric tails: 2 * q/(2-q) * (1-q)^(K+1) / q
        tail = 2.0 * (1.0 - q) ** (half_window + 1) / (2.0 - q)
        return body + tail
    beta = law.beta
    k = float(half_window)
    # Euler-Maclaurin tail of 2 * sum_{j > K} j^(-beta) / (2 zeta(beta))
    tail_sum = (
        k ** (1.0 - beta) / (beta - 1.0)
        - 0.5 * k ** (-beta)
        + beta / 12.0 * k ** (-beta - 1.0)
    )
    return body + tail_sum / zeta(beta)


def mean_absolute_step(law: MutationLaw) -> float:
    """E|Z| where finite; the power law with beta < 2 has no finite mean."""
    if isinstance(law, UnitStep):
        return 1.0
    if isinstance(law, BilateralGeometric):
        q = law.q
        return 2.0 * (1.0 - q) / (q * (2.0 - q))
    return math.inf


def chi_square_gof(
    law: MutationLaw,
    rng: np.random.Generator,
    draws: int = 10**6,
    half_window: int = 20,
    min_expected: float = 5.0,
) -> float:
    """Goodness-of-fit p-value of ``sample`` against ``pmf``.

    Draws are binned per value on [-half_window, half_window] with the two
    open tails as extra bins; bins expecting fewer than ``min_expected``
    hits are pooled outward into the tails.  Returns the Pearson
    chi-square survival probability; values above the chosen significance
    level mean the empirical law is indistinguishable from the pmf.
    """
    from scipy.stats import chi2

    if isinstance(law, UnitStep):
        raise ValueError("chi-square windowing targets the unbounded laws")
    xs = sample_many(law, rng, draws)
    w = half_window
    inner_probs = np.array([pmf(law, k) for k in range(-w, w + 1)])
    left_tail = (1.0 - inner_probs.sum()) / 2.0  # symmetry
    right_tail = left_tail

    counts = np.zeros(2 * w + 3, dtype=np.int64)  # [left, -w..w, right]
    clipped = np.clip(xs, -w - 1, w + 1)
    vals, cnts = np.unique(clipped, return_counts=True)
    for v, c in zip(vals, cnts):
        counts[int(v) + w + 1] = c
    expected = np.concatenate(([left_tail], inner_probs, [right_tail])) * draws

    # pool under-populated bins into the tails, outside inward
    obs: list[float] = []
    exp: list[float] = []
    lo, hi = 0, len(expected) - 1
    acc_o, acc_e = 0.0, 0.0
    while lo <= hi and expected[lo] + acc_e < min_expected:
        acc_o += counts[lo]
        acc_e += expected[lo]
        lo += 1
    if lo > hi:
        raise ValueError("window too narrow for a chi-square test")
    obs.append(acc_o + counts[lo])
    exp.append(acc_e + expected[lo])
    lo += 1
    acc_o, acc_e = 0.0, 0.0
    while hi >= lo and expected[hi] + acc_e < min_expected:
        acc_o += counts[hi]
        acc_e += expected[hi]
        hi -= 1
    tail_o, tail_e = acc_o + counts[hi], acc_e + expected[hi]
    for i in range(lo, hi):
        if expected[i] == 0.0:
            if counts[i] > 0:
                return 0.0  # drew a value the law assigns zero mass
            continue
        obs.append(float(counts[i]))
        exp.append(float(expected[i]))
    obs.append(tail_o)
    exp.append(tail_e)

    obs_arr = np.array(obs)
    exp_arr = np.array(exp)
    # renormalize the tiny mass lost to pooling so totals match exactly
    exp_arr *= obs_arr.sum() / exp_arr.sum()
    stat = float(((obs_arr - exp_arr) ** 2 / exp_arr).sum())
    dof = len(obs_arr) - 1
    return float(chi2.sf(stat, dof))
