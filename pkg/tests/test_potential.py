"""Potential model: coefficients, rho(m), equivalence and decay checks."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hillriesz as hr
from hillriesz.errors import FrequencyRangeError, PotentialSpecError


class TestFourierCoefficient:
    def test_cosine_expansion(self, cos4):
        # 2cos(4 pi x) = e^{i4pix} + e^{-i4pix}
        assert hr.fourier_coefficient(cos4, 2) == 1.0 + 0.0j
        assert hr.fourier_coefficient(cos4, -2) == 1.0 + 0.0j
        assert hr.fourier_coefficient(cos4, 1) == 0.0

    def test_zero_potential(self):
        q = hr.zero_potential()
        for m in (-3, 0, 1, 7):
            assert hr.fourier_coefficient(q, m) == 0.0

    def test_sampled_sawtooth_matches_closed_form(self):
        # sawtooth of 2x: frac(2x) - 1/2 has coefficients i/(pi m) at even m;
        # the jump makes the grid quadrature first-order, error ~ 1/n
        expected = 1j / (4 * math.pi)
        errs = []
        for n in (4096, 16384):
            xs = np.arange(n) / n
            q = hr.from_samples(np.mod(2 * xs, 1.0) - 0.5)
            errs.append(abs(q.coefficient(4) - expected))
            assert abs(q.coefficient(3)) < 1e-12
        assert errs[0] < 2.0 / 4096
        assert errs[1] < errs[0] / 3.0

    def test_beyond_band_is_zero_for_fourier_models(self, cos4):
        assert hr.fourier_coefficient(cos4, 50) == 0.0

    def test_beyond_nyquist_raises_for_sampled(self):
        q = hr.from_samples(np.exp(2j * math.pi * np.arange(64) / 64))
        with pytest.raises(FrequencyRangeError):
            q.coefficient(40)

    def test_linearity(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            p1 = [(int(k), complex(*rng.normal(size=2))) for k in rng.integers(1, 9, 4)]
            p2 = [(-int(k), complex(*rng.normal(size=2))) for k in rng.integers(1, 9, 4)]
            a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            q1, q2 = hr.trig_potential(p1), hr.trig_potential(p2)
            qs = hr.trig_potential([(k, a * amp) for k, amp in p1]
                                   + [(k, b * amp) for k, amp in p2])
            for m in range(-10, 11):
                lhs = qs.coefficient(m)
                rhs = a * q1.coefficient(m) + b * q2.coefficient(m)
                assert abs(lhs - rhs) < 1e-12

    def test_realness_flag_mirrors_conjugate(self):
        q = hr.trig_potential([(1, 0.5 + 0.25j), (3, -0.125j)], real=True)
        for m in (1, 3):
            assert q.coefficient(-m) == np.conj(q.coefficient(m))

    def test_mean_is_recorded_not_stored(self):
        q = hr.trig_potential([(0, 2.5), (1, 1.0)])
        assert q.coefficient(0) == 0.0
        assert q.mean_shift == 2.5 + 0.0j


class TestRho:
    def test_resonant_branch(self):
        # q = e^{i4pix}, m=1: minus-branch integrand is 1, sup = 1 at x = 1
        q = hr.trig_potential([(2, 1.0)])
        e = hr.rho(q, 1, "periodic")
        assert e.rho == pytest.approx(1.0, abs=1e-12)
        assert e.branch == "minus"
        assert e.witness_x == pytest.approx(1.0, abs=1e-9)

    def test_zero_potential(self):
        e = hr.rho(hr.zero_potential(), 3, "periodic")
        assert e.rho == 0.0

    def test_off_resonant_closed_form(self):
        # q = e^{i4pix}, m=2: |( e^{-i4pix} - 1 )/(4 pi)| peaks at 1/(2 pi), x = 1/4
        q = hr.trig_potential([(2, 1.0)])
        e = hr.rho(q, 2, "periodic")
        assert e.rho == pytest.approx(1 / (2 * math.pi), abs=1e-10)
        assert e.branch == "minus"
        assert min(abs(e.witness_x - 0.25), abs(e.witness_x - 0.75)) < 1e-6

    def test_endpoint_identity_lower_bound(self, cos4):
        # minus-branch partial integral at x=1 equals q_{2m} exactly
        for m in (1, 2, 5):
            val = hr.potential.partial_integral(cos4, 2 * m, np.array([1.0]))[0]
            assert abs(val - cos4.coefficient(2 * m)) < 1e-14
            assert hr.rho(cos4, m).rho >= abs(cos4.coefficient(2 * m)) - 1e-12

    def test_riemann_lebesgue_trend(self):
        # fitted log-log slope of rho(m) over m in [5, 50] is <= 0 for builtins
        ms = np.arange(5, 51, 5)
        for q in (hr.cosine_potential(2, 2.0),
                  hr.power_family(1.0, mmax=60),
                  hr.asym_power_family(1.0, 2.0, mmax=60),
                  hr.one_sided_family(1.0, mmax=60)):
            vals = [hr.rho(q, int(m)).rho for m in ms]
            slope = hr.fitted_loglog_slope(ms, vals)
            assert slope <= 0.0

    def test_lower_bound_trend(self):
        # m * rho(m) stays away from zero: fitted slope > -0.1
        ms = np.arange(5, 51, 5)
        for q in (hr.power_family(1.0, mmax=60), hr.one_sided_family(1.0, mmax=60)):
            vals = [m * hr.rho(q, int(m)).rho for m in ms]
            assert min(vals) > 0.0
            assert hr.fitted_loglog_slope(ms, vals) > -0.1

    def test_antiperiodic_uses_odd_frequency(self):
        # q = e^{i6pix} resonates with 2m+1 = 3 (m = 1) under the substitution
        q = hr.trig_potential([(3, 1.0)])
        e = hr.rho(q, 1, "antiperiodic")
        assert e.rho == pytest.approx(1.0, abs=1e-12)
        assert e.branch == "minus"

    def test_table(self, cos4):
        table = hr.rho_table(cos4, range(1, 6), "periodic")
        assert table.ms() == [1, 2, 3, 4, 5]
        assert table.rho(1) > 0


class TestEquivalence:
    def test_identical_sequences(self):
        ms = np.arange(5, 51)
        a = 1.0 / ms
        v = hr.check_equivalence(a, a, ms)
        assert v.holds and v.ratio_min == v.ratio_max == 1.0

    def test_growing_ratio_fails(self):
        ms = np.arange(5, 51)
        v = hr.check_equivalence(1.0 / ms, 1.0 / ms**2, ms)
        assert not v.holds

    def test_symmetric_family_ratio_one(self):
        q = hr.power_family(1.0, mmax=50)
        ms = np.arange(5, 51)
        a = q.coefficient_array(2 * ms)
        b = q.coefficient_array(-2 * ms)
        v = hr.check_equivalence(a, b, ms)
        assert v.holds and v.ratio_min == pytest.approx(1.0) and v.ratio_max == pytest.approx(1.0)

    def test_zero_denominator_verdict_not_exception(self):
        ms = np.arange(1, 10)
        b = 1.0 / ms
        b = np.where(ms == 4, 0.0, b)
        v = hr.check_equivalence(1.0 / ms, b, ms)
        assert not v.holds and not v.indeterminate

    @given(st.floats(min_value=0.1, max_value=10.0),
           st.floats(min_value=-0.05, max_value=0.05))
    @settings(max_examples=25, deadline=None)
    def test_scaled_power_laws_hold(self, c, eps):
        # a_m = c * m^eps * b_m with tiny drift stays within thresholds
        ms = np.arange(5, 40, dtype=float)
        b = 1.0 / ms
        a = c * ms**eps * b
        assert hr.check_equivalence(a, b, ms).holds


class TestDecayCondition:
    def test_symmetric_family_flag_true(self):
        q = hr.power_family(1.0, mmax=40)
        table = hr.rho_table(q, range(5, 31), "periodic")
        rep = hr.check_decay_condition(q, table, (5, 30), "plus")
        assert rep.status == "ok"
        assert rep.tends_to_zero
        assert rep.log_slope < -0.5

    def test_finite_support_not_applicable(self, cos4):
        table = hr.rho_table(cos4, range(3, 21), "periodic")
        rep = hr.check_decay_condition(cos4, table, (3, 20), "plus")
        assert rep.status == "not-applicable"

    def test_asymmetric_sides_differ(self):
        q = hr.asym_power_family(1.0, 2.0, mmax=40)
        table = hr.rho_table(q, range(5, 31), "periodic")
        plus = hr.check_decay_condition(q, table, (5, 30), "plus")
        minus = hr.check_decay_condition(q, table, (5, 30), "minus")
        assert plus.tends_to_zero
        assert not minus.tends_to_zero


class TestSpecParsing:
    def test_trig_roundtrip(self):
        q = hr.from_spec({"type": "trig", "coeffs": [[2, 1.0, 0.0], [-2, 0.5, -0.5]]})
        assert q.coefficient(2) == 1.0
        assert q.coefficient(-2) == 0.5 - 0.5j

    def test_json_string(self):
        q = hr.from_spec(json.dumps({"type": "power", "alpha": 1.0, "mmax": 5}))
        assert q.coefficient(2) == 1.0
        assert q.coefficient(10) == pytest.approx(0.2)

    def test_one_sided(self):
        q = hr.from_spec({"type": "one-sided", "alpha": 1.0, "mmax": 4})
        assert q.coefficient(2) == 1.0
        assert q.coefficient(-2) == 0.0

    def test_samples(self):
        xs = np.arange(64) / 64
        vals = np.cos(4 * math.pi * xs)
        q = hr.from_spec({"type": "samples", "values": [[v, 0.0] for v in vals]})
        assert abs(q.coefficient(2) - 0.5) < 1e-12

    def test_samples_grid_must_be_power_of_two(self):
        with pytest.raises(PotentialSpecError):
            hr.from_samples(np.zeros(100))

    def test_unknown_type(self):
        with pytest.raises(PotentialSpecError):
            hr.from_spec({"type": "chirp"})

    def test_dft_matches_coeffs_for_sampled(self):
        rng = np.random.default_rng(3)
        pairs = [(int(k), complex(*rng.normal(size=2)) / 4) for k in range(1, 6)]
        q0 = hr.trig_potential(pairs)
        xs = np.arange(256) / 256
        q1 = hr.from_samples(q0.evaluate(xs))
        for k in range(-8, 9):
            assert abs(q1.coefficient(k) - q0.coefficient(k)) < 1e-12
