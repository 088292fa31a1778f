import cmath
import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy import stats

from benford_mod1 import convolution_engine as ce
from benford_mod1 import density_core as dc
from benford_mod1 import distributions as dist
from benford_mod1.density_core import DensitySequence
from benford_mod1.errors import DomainError, RangeError

from conftest import quadrature_only

# mpmath, 50 digits (notes: oracles1.py)
PARETO2_F_AT_2 = 0.847540532873729779
PARETO2_DENSITY_AT_2 = 0.305115121252794380
PARETO2_SAMPLE_HALF = 4.1132503787829275  # exp(sqrt(2))


class TestBox:
    def test_closed_form(self):
        for m in (1, 2, 3, 4, 10):
            for n in (1, 2, 5, -3):
                t = math.pi * n / m
                expected = cmath.exp(-2j * math.pi * n / 8) * math.sin(t) / t
                assert abs(dist.box_spectrum_coefficient(m, n) - expected) < 1e-15

    def test_phi1_is_uniform(self):
        assert abs(dist.box_spectrum_coefficient(1, 3)) < 1e-15

    @pytest.mark.parametrize("m", [2, 3, 7, 121, 1331])
    def test_quadrature_agrees(self, m):
        d = dist.box_density(m)
        q = quadrature_only(d)
        for n in (1, 4, 9):
            assert abs(dc.fourier_coefficient(q, n) - dist.box_spectrum_coefficient(m, n)) < 1e-10

    def test_modulus_increases_in_m(self):
        for n in (1, 2, 5):
            mods = [abs(dist.box_spectrum_coefficient(m, n)) for m in range(n + 1, 200)]
            assert all(b > a for a, b in zip(mods, mods[1:]))
            assert abs(dist.box_spectrum_coefficient(10 ** 9, n)) > 1 - 1e-15

    def test_huge_parameter(self):
        m = 11 ** 1000
        assert dist.box_spectrum_coefficient(m, 1) == pytest.approx(cmath.exp(-2j * math.pi / 8))
        assert float(dist.sample_box_log_mantissa(m, 0.3)) == 0.125

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            dist.box_spectrum_coefficient(0, 1)

    @pytest.mark.parametrize("i", [2, 3, 4, 8, 32])
    def test_identical_boxes_converge(self, i):
        v = ce.convergence_verdict(DensitySequence.repeated(dist.box_density(i)))
        assert v.converges

    def test_cycle_family(self):
        seq = dist.box_cycle_sequence(3, 5)
        assert [seq[m].label for m in range(1, 7)] == ["box(4)", "box(5)", "box(6)", "box(7)", "box(3)", "box(4)"]


class TestPareto:
    def test_normalised(self):
        # substitute x = e^y; the heavy x-tail defeats quad on [e, inf) directly
        total = sp_integrate.quad(lambda y: dist.pareto_density(2, math.exp(y)) * math.exp(y),
                                  1.0, 200.0, epsabs=1e-13, limit=200)[0] + 200.0 ** -2
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_cdf_matches_density(self):
        x = 50.0
        val = sp_integrate.quad(lambda t: dist.pareto_density(1.5, t), math.e, x)[0]
        assert dist.pareto_cdf(1.5, x) == pytest.approx(val, abs=1e-10)

    def test_sampler(self):
        assert dist.sample_pareto(2, 0.5) == pytest.approx(PARETO2_SAMPLE_HALF, rel=1e-15)
        with pytest.raises(DomainError):
            dist.sample_pareto(2, 1.0)

    def test_series_values(self):
        F, tf = dist.pareto_mantissa_cdf(2, 2.0, 100_000)
        f, td = dist.pareto_mantissa_density(2, 2.0, 100_000)
        assert abs(F - PARETO2_F_AT_2) <= tf + 1e-13
        assert abs(f - PARETO2_DENSITY_AT_2) <= td + 1e-13

    def test_series_endpoints(self):
        assert dist.pareto_mantissa_cdf(2, 1.0, 10)[0] == 0.0
        F, tail = dist.pareto_mantissa_cdf(2, math.e, 1000)
        assert 1 - F <= tail

    def test_density_partial_sums_monotone(self):
        prev = 0.0
        for terms in (1, 10, 100, 1000, 10_000):
            v, t = dist.pareto_mantissa_density(1.5, 1.7, terms)
            assert v >= prev
            prev = v
            full, _ = dist.pareto_mantissa_density(1.5, 1.7, 10 ** 6)
            assert full <= v + t

    def test_series_reject_small_alpha(self):
        with pytest.raises(DomainError):
            dist.pareto_mantissa_cdf(1.0, 2.0, 10)

    def test_hurwitz_density_matches_series(self):
        g = dist.pareto_log_mantissa_density(2.0)
        t = math.log(2.0)
        f, tail = dist.pareto_mantissa_density(2.0, 2.0, 10 ** 6)
        # density of the log-mantissa at t equals s * density of the mantissa at s = e^t
        assert float(g.evaluate(np.array([t]))[0]) == pytest.approx(2.0 * f, abs=2 * tail + 1e-12)
        assert float(g.cdf(np.array([t]))[0]) == pytest.approx(PARETO2_F_AT_2, abs=1e-12)

    @pytest.mark.parametrize("base", [math.e, 10])
    def test_log_mantissa_mass(self, base):
        g = dist.pareto_log_mantissa_density(1.5, base)
        assert dc.fourier_coefficient(g, 0) == pytest.approx(1.0, abs=1e-9)

    def test_condition_holds(self):
        g = dist.pareto_log_mantissa_density(2.0)
        s = dc.spectrum(g, 8)
        assert np.all(np.abs(s.nonnegative()[1:]) < 1 - 1e-4)

    def test_series_vs_monte_carlo(self):
        rng = np.random.default_rng(7)
        y = dist.sample_pareto_log_mantissa(2.0, rng.random(10 ** 6))
        for s in (1.3, 2.0, 2.5):
            p, tail = dist.pareto_mantissa_cdf(2.0, s, 10 ** 5)
            emp = np.mean(y <= math.log(s))
            se = math.sqrt(p * (1 - p) / y.size)
            assert abs(emp - p) < 3 * se + tail


class TestPushforward:
    def test_pareto(self):
        f = dist.modified_pareto(2.0)
        v, bound = dist.mantissa_pushforward_cdf(f, 2.0, math.e, 100_000)
        assert abs(v - PARETO2_F_AT_2) <= bound + 1e-12

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
    def test_total_mass_at_B(self, alpha):
        f = dist.modified_pareto(alpha)
        v, bound = dist.mantissa_pushforward_cdf(f, 10.0, 10, 5_000_000 if alpha < 2 else 50_000)
        assert abs(v - 1.0) <= bound

    def test_lognormal(self):
        ln = stats.lognorm(s=0.5, scale=3.0)
        f = dist.PositiveDensity(ln.pdf)
        v, bound = dist.mantissa_pushforward_cdf(f, 10.0, 10, 5)
        assert abs(v - 1.0) <= bound + 1e-9
        v, bound = dist.mantissa_pushforward_cdf(f, 4.0, 10, 5)
        expected = sum(ln.cdf(4.0 * 10.0 ** k) - ln.cdf(10.0 ** k) for k in range(-5, 6))
        assert v == pytest.approx(expected, abs=1e-9)

    def test_range_too_small(self):
        with pytest.raises(RangeError):
            dist.mantissa_pushforward_cdf(dist.modified_pareto(2.0), 2.0, 10, 3)
