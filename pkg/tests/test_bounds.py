import math

import mpmath as mp
import numpy as np
import pytest

from intmoea.bounds import (
    BoundInputs,
    bound_exp_tail_shape,
    bound_lemma_phase_terms,
    bound_power_law,
    bound_unit_step,
    ezz_constant,
)
from intmoea.moea import AlgorithmKind

mp.mp.dps = 50

SEMO = AlgorithmKind.SEMO
GSEMO = AlgorithmKind.GSEMO


# Independent transcriptions of the bound displays, written against mpmath
# so that any copying slip in the package formulas shows up as a mismatch.

def unit_step_mp(n, a, x0, gsemo):
    v = 2 * mp.mpf(n) * (2 * a + 1) * (x0 + 2 * a)
    return float(v * mp.e if gsemo else v)


def power_law_mp(n, a, x0, beta):
    b, nn, aa, xx = mp.mpf(beta), mp.mpf(n), mp.mpf(a), mp.mpf(x0)
    z = mp.zeta(b)
    front = 2 * aa + 1
    t1 = front * 2 * mp.e * nn * z * (
        mp.power(2, 1 / (2 - b)) + 2 * (2 - b) / (b - 1) * mp.power(xx, b - 1)
    )
    t2 = (
        4 * mp.log(2) * mp.e * nn
        * (z * (b - 1) / (1 - mp.power(mp.mpf(3) / 2, 1 - b)))
        * (1 / (1 - mp.power(2, 1 - b)) ** 2)
        * mp.power(front, b)
    )
    t3 = front * 2 * mp.e * nn * z * (mp.log(aa + 1) + 1)
    return float(t1 + t2 + t3)


def exp_tail_shape_mp(n, a, x0, q, C):
    nn, aa, xx, qq = mp.mpf(n), mp.mpf(a), mp.mpf(x0), mp.mpf(q)
    la = mp.log(aa + 1)
    inner = nn / qq + xx * qq + max(la / (aa * qq), aa * qq + la)
    return float(C * aa * nn * inner)


class TestUnitStep:
    def test_example_semo(self):
        assert bound_unit_step(BoundInputs(SEMO, 2, 1, 0)) == 24.0

    def test_example_degenerate_a0(self):
        assert bound_unit_step(BoundInputs(SEMO, 2, 0, 0)) == 0.0
        assert bound_unit_step(BoundInputs(SEMO, 2, 0, 9)) == 0.0

    def test_example_gsemo(self):
        v = bound_unit_step(BoundInputs(GSEMO, 2, 1, 3))
        assert v == pytest.approx(60 * math.e, rel=1e-12)
        assert v == pytest.approx(163.1, abs=0.1)

    def test_gsemo_is_e_times_semo_exactly(self):
        for n in (2, 3, 7):
            for a in (1, 5, 200):
                for x0 in (0, 17, 20_000):
                    s = bound_unit_step(BoundInputs(SEMO, n, a, x0))
                    g = bound_unit_step(BoundInputs(GSEMO, n, a, x0))
                    assert g == s * math.e

    def test_dual_transcription(self):
        for n in (2, 4, 10):
            for a in (1, 20, 200):
                for x0 in (0, 100, 20_000):
                    for algo, gsemo in ((SEMO, False), (GSEMO, True)):
                        mine = bound_unit_step(BoundInputs(algo, n, a, x0))
                        ref = unit_step_mp(n, a, x0, gsemo)
                        assert mine == pytest.approx(ref, rel=1e-9)

    def test_phase_terms_sum_to_total(self):
        for algo in (SEMO, GSEMO):
            inp = BoundInputs(algo, 3, 7, 123)
            ph = bound_lemma_phase_terms(inp)
            assert ph.total == pytest.approx(bound_unit_step(inp), rel=1e-12)

    def test_phase1_zero_when_starting_at_origin(self):
        ph = bound_lemma_phase_terms(BoundInputs(SEMO, 2, 3, 0))
        assert ph.phase1 == 0.0
        assert ph.phase2 > 0.0


class TestPowerLaw:
    def test_dual_transcription(self):
        cases = [
            (2, 200, 20_000, 1.5),
            (4, 200, 20_000, 1.5),
            (10, 200, 20_000, 1.5),
            (2, 50, 5_000, 1.2),
            (3, 7, 100, 1.9),
            (2, 1, 0, 1.5),
        ]
        for n, a, x0, beta in cases:
            mine = bound_power_law(BoundInputs(GSEMO, n, a, x0, beta=beta))
            assert mine == pytest.approx(power_law_mp(n, a, x0, beta), rel=1e-9)

    def test_same_for_both_algorithms(self):
        inp_s = BoundInputs(SEMO, 2, 20, 500, beta=1.5)
        inp_g = BoundInputs(GSEMO, 2, 20, 500, beta=1.5)
        assert bound_power_law(inp_s) == bound_power_law(inp_g)

    def test_monotone_in_a(self):
        vals = [
            bound_power_law(BoundInputs(GSEMO, 2, a, 1000, beta=1.5))
            for a in range(1, 60)
        ]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_monotone_in_x0_norm(self):
        vals = [
            bound_power_law(BoundInputs(GSEMO, 2, 10, x, beta=1.5))
            for x in range(0, 5000, 100)
        ]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_phase_terms_sum_to_total(self):
        inp = BoundInputs(GSEMO, 2, 200, 20_000, beta=1.5)
        ph = bound_lemma_phase_terms(inp)
        assert ph.total == pytest.approx(bound_power_law(inp), rel=1e-9)

    def test_a0_convention(self):
        assert bound_power_law(BoundInputs(GSEMO, 2, 0, 50, beta=1.5)) == 0.0

    def test_requires_beta(self):
        with pytest.raises(ValueError):
            bound_power_law(BoundInputs(GSEMO, 2, 2, 5))


class TestExpTailShape:
    def test_zero_scale(self):
        assert bound_exp_tail_shape(BoundInputs(GSEMO, 2, 5, 10, q=0.1), C=0.0) == 0.0

    def test_transcribed_value(self):
        v = bound_exp_tail_shape(BoundInputs(GSEMO, 2, 200, 20_000, q=1 / 200), C=1.0)
        assert v == pytest.approx(exp_tail_shape_mp(2, 200, 20_000, 1 / 200, 1.0), rel=1e-9)

    def test_dual_transcription_grid(self):
        for q in (0.002, 0.02, 0.2):
            for a in (1, 20, 200):
                v = bound_exp_tail_shape(BoundInputs(GSEMO, 2, a, 100 * a, q=q), C=2.5)
                assert v == pytest.approx(exp_tail_shape_mp(2, a, 100 * a, q, 2.5), rel=1e-9)

    def test_a0_convention(self):
        assert bound_exp_tail_shape(BoundInputs(GSEMO, 2, 0, 10, q=0.1), C=1.0) == 0.0

    def test_linear_in_C(self):
        inp = BoundInputs(GSEMO, 2, 50, 5000, q=0.05)
        assert bound_exp_tail_shape(inp, 3.0) == pytest.approx(
            3.0 * bound_exp_tail_shape(inp, 1.0), rel=1e-12
        )

    def test_minimizer_location(self):
        # for the scenario-1 instance the best q sits well inside [1/500, 1/20]
        qs = np.geomspace(1 / 2000, 0.4, 600)
        vals = [
            bound_exp_tail_shape(BoundInputs(GSEMO, 2, 200, 20_000, q=float(q)), C=1.0)
            for q in qs
        ]
        q_best = float(qs[int(np.argmin(vals))])
        assert 1 / 500 <= q_best <= 1 / 20


class TestPhaseTermsExpTail:
    def test_explicit_phase1(self):
        q, C, n, a, x0 = 0.05, 0.5, 2, 20, 2000
        ph = bound_lemma_phase_terms(BoundInputs(GSEMO, n, a, x0, q=q), C=C)
        K = ezz_constant(C)
        expected = (2 * a + 1) * math.e * n / K * (
            n * math.pi**2 / (6 * q) + 4 * x0 * q
        )
        assert ph.phase1 == pytest.approx(expected, rel=1e-12)

    def test_requires_C(self):
        with pytest.raises(ValueError):
            bound_lemma_phase_terms(BoundInputs(GSEMO, 2, 5, 10, q=0.1))

    def test_requires_q_at_most_C(self):
        with pytest.raises(ValueError):
            bound_lemma_phase_terms(BoundInputs(GSEMO, 2, 5, 10, q=0.6), C=0.5)

    def test_ezz_constant(self):
        assert ezz_constant(0.5) == pytest.approx((1 / 4) * (0.5 / 1.5), rel=1e-12)
        with pytest.raises(ValueError):
            ezz_constant(1.0)


class TestValidation:
    def test_input_ranges(self):
        with pytest.raises(ValueError):
            BoundInputs(GSEMO, 1, 1, 0)
        with pytest.raises(ValueError):
            BoundInputs(GSEMO, 2, -1, 0)
        with pytest.raises(ValueError):
            BoundInputs(GSEMO, 2, 1, -1)
        with pytest.raises(ValueError):
            BoundInputs(GSEMO, 2, 1, 0, q=1.5)
        with pytest.raises(ValueError):
            BoundInputs(GSEMO, 2, 1, 0, beta=2.5)
