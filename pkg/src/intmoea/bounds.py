"""Closed-form runtime upper bounds, evaluated exactly.

Unit-step and power-law bounds are certified ceilings on the expected
number of evaluations and may be asserted against empirical means.  The
exponential-tail expression carries an existential constant, so only a
*shape* is evaluated: callers supply the scale factor and must not treat
the result as a ceiling.

Convention: every evaluator returns 0 for a = 0 and comparison harnesses
skip ceiling checks there (a degenerate front of one point; actual
runtimes start at a single evaluation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .moea import AlgorithmKind
from .samplers import zeta


@dataclass(frozen=True)
class BoundInputs:
    """Everything the bound formulas read: instance, start norm, law params."""

    algorithm: AlgorithmKind
    n: int
    a: int
    x0_norm: int
    q: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.a < 0:
            raise ValueError(f"a must be >= 0, got {self.a}")
        if self.x0_norm < 0:
            raise ValueError(f"x0_norm must be >= 0, got {self.x0_norm}")
        if self.q is not None and not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly in (0, 1), got {self.q}")
        if self.beta is not None and not (1.0 < self.beta < 2.0):
            raise ValueError(f"beta must lie strictly in (1, 2), got {self.beta}")


@dataclass(frozen=True)
class PhaseBounds:
    """Per-phase bound terms; total is their sum."""

    phase1: float
    phase2: float

    @property
    def total(self) -> float:
        return self.phase1 + self.phase2


def _gsemo_factor(algorithm: AlgorithmKind) -> float:
    return math.e if algorithm is AlgorithmKind.GSEMO else 1.0


def bound_unit_step(inp: BoundInputs) -> float:
    """Certified ceiling for unit-step mutation.

    2n (2a+1) (x0_norm + 2a) for single-dimensional mutation; the
    full-dimensional variant carries an extra factor e.
    """
    if inp.a == 0:
        return 0.0
    base = 2.0 * inp.n * (2 * inp.a + 1) * (inp.x0_norm + 2 * inp.a)
    return _gsemo_factor(inp.algorithm) * base


def _power_law_terms(inp: BoundInputs) -> tuple[float, float, float]:
    beta = inp.beta
    if beta is None:
        raise ValueError("power-law bound requires beta")
    a, n, x0 = inp.a, inp.n, float(inp.x0_norm)
    z = zeta(beta)
    front = 2 * a + 1
    term1 = (
        front
        * 2.0
        * math.e
        * n
        * z
        * (2.0 ** (1.0 / (2.0 - beta)) + 2.0 * (2.0 - beta) / (beta - 1.0) * x0 ** (beta - 1.0))
    )
    term2 = (
        4.0
        * math.log(2.0)
        * math.e
        * n
        * (z * (beta - 1.0) / (1.0 - 1.5 ** (1.0 - beta)))
        * (1.0 / (1.0 - 2.0 ** (1.0 - beta)) ** 2)
        * front**beta
    )
    term3 = front * 2.0 * math.e * n * z * (math.log(a + 1.0) + 1.0)
    return term1, term2, term3


def bound_power_law(inp: BoundInputs) -> float:
    """Certified ceiling for power-law mutation; identical for both
    single- and full-dimensional variants."""
    if inp.a == 0:
        return 0.0
    t1, t2, t3 = _power_law_terms(inp)
    return t1 + t2 + t3


def bound_exp_tail_shape(inp: BoundInputs, C: float) -> float:
    """Shape of the exponential-tail runtime expression, scaled by C.

    Evaluates C * a n (n/q + x0_norm q + max(ln(a+1)/(a q), a q + ln(a+1))).
    The underlying constant is existential and unspecified, so this is a
    shape function for parameter studies, never a certified ceiling.
    """
    if inp.q is None:
        raise ValueError("exponential-tail shape requires q")
    if C < 0.0:
        raise ValueError(f"C must be non-negative, got {C}")
    if inp.a == 0:
        return 0.0
    a, n, q = inp.a, inp.n, inp.q
    la = math.log(a + 1.0)
    inner = n / q + inp.x0_norm * q + max(la / (a * q), a * q + la)
    return C * (a * n * inner)


def ezz_constant(C: float) -> float:
    """The explicit constant (1-C)/(4(2-C)) valid for all q <= C."""
    if not (0.0 < C < 1.0):
        raise ValueError(f"C must lie strictly in (0, 1), got {C}")
    return 0.25 * (1.0 - C) / (2.0 - C)


def bound_lemma_phase_terms(inp: BoundInputs, C: Optional[float] = None) -> PhaseBounds:
    """Per-phase bound terms for the law selected by the inputs.

    Unit step: 2n(2a+1) x0_norm and 2n(2a+1) 2a (times e for the
    full-dimensional variant); their sum equals ``bound_unit_step``.

    Exponential tail (q set): phase 1 is the explicit expression
    (2a+1) e n / K * (n pi^2 / (6q) + 4 x0_norm q) with K = ezz_constant(C),
    certified whenever q <= C; phase 2 is a shape only (unit scale),
    mirroring ``bound_exp_tail_shape``'s max term.

    Power law (beta set): phase 1 is the first summand of
    ``bound_power_law`` and phase 2 the remaining two; sums match exactly.
    """
    if inp.a == 0:
        return PhaseBounds(0.0, 0.0)
    if inp.q is not None:
        if C is None:
            raise ValueError("exponential-tail phase terms require the constant C")
        if inp.q > C:
            raise ValueError(f"phase-1 term requires q <= C, got q={inp.q}, C={C}")
        K = ezz_constant(C)
        a, n, q = inp.a, inp.n, inp.q
        phase1 = (2 * a + 1) * math.e * n / K * (n * math.pi**2 / (6.0 * q) + 4.0 * inp.x0_norm * q)
        la = math.log(a + 1.0)
        phase2 = a * n * max(la / (a * q), a * q + la)
        return PhaseBounds(phase1, phase2)
    if inp.beta is not None:
        t1, t2, t3 = _power_law_terms(inp)
        return PhaseBounds(t1, t2 + t3)
    scale = 2.0 * inp.n * (2 * inp.a + 1) * _gsemo_factor(inp.algorithm)
    return PhaseBounds(scale * inp.x0_norm, scale * 2 * inp.a)
