import math

import numpy as np
import pytest
from scipy import integrate

import qubath.bath.degeneracy as qbdeg
import qubath.bath.distribution as qbdist
from qubath.exceptions import DivergentExpectationError, InvalidParameterError


def thermal_weight(N, J, T):
    # Ising bath weight exp(beta J j^2 / N) at w = 0
    return lambda j: math.exp(j * j / (N * T) * J)


class TestExactDistribution:

    @pytest.mark.parametrize("N, spin", [(6, "1/2"), (9, "1"), (13, "3/2"), (40, "2")])
    def test_exact_law_is_normalized(self, N, spin):
        table = qbdeg.degeneracy_table(N, spin)
        total = sum(qbdist.exact_pmf_fraction(table, j) for j in table.js())
        assert total == 1, f"exact probabilities should add up to exactly 1 for N={N}, S={spin}, got {total}"

    def test_exact_expectation_of_constant(self):
        dist = qbdist.JDistribution.exact(qbdeg.degeneracy_table(30, "1"))
        assert abs(dist.normalization - 1) < 1e-14, f"<1> should be 1, got {dist.normalization}"

    @pytest.mark.parametrize("spin", ["1/2", "1", "3/2"])
    def test_gaussian_law_approaches_exact_law(self, spin):
        distances = [qbdist.kolmogorov_distance(qbdeg.degeneracy_table(N, spin)) for N in (8, 32, 128)]
        assert distances[0] > distances[1] > distances[2], \
            f"Kolmogorov distance should shrink with N for S={spin}:" + \
            f"\n- N = 8, 32, 128: {distances}"
        assert distances[2] < 0.05, f"distance at N=128 should be small for S={spin}, got {distances[2]}"


class TestGaussianDistribution:

    @pytest.mark.parametrize("N", [10, 1000, 10 ** 6])
    @pytest.mark.parametrize("spin", ["1/2", "1", "5/2", "10"])
    def test_density_is_normalized(self, N, spin):
        dist = qbdist.JDistribution.gaussian(N, spin)
        assert abs(dist.normalization - 1) < 1e-9, \
            f"gaussian law should integrate to 1 for N={N}, S={spin}, got {dist.normalization}"

    @pytest.mark.parametrize("N, spin", [(100, "1/2"), (1000, "1"), (50, "3")])
    def test_moments_match_quadrature(self, N, spin):
        dist = qbdist.JDistribution.gaussian(N, spin)
        mean, variance = qbdist.moments(N, spin)
        first = qbdist.expectation(dist, lambda j: j)
        second = qbdist.expectation(dist, lambda j: j * j)
        assert math.isclose(first, mean, rel_tol=1e-8), \
            f"mean disagrees for N={N}, S={spin}:" + \
            f"\n- closed form: {mean}" + \
            f"\n- quadrature: {first}"
        assert math.isclose(second - first ** 2, variance, rel_tol=1e-7), \
            f"variance disagrees for N={N}, S={spin}:" + \
            f"\n- closed form: {variance}" + \
            f"\n- quadrature: {second - first ** 2}"

    def test_cdf_is_the_integral_of_the_density(self):
        N, spin = 200, "3/2"
        for upper in np.linspace(10, 80, 8):
            integral, _ = integrate.quad(lambda j: qbdist.gaussian_pdf(N, spin, j), 0, upper, epsabs=1e-13)
            cdf = qbdist.gaussian_cdf(N, spin, upper)
            assert abs(integral - cdf) < 1e-9, f"F({upper}) = {cdf} but the density integrates to {integral}"

    def test_thermal_weight_below_critical_temperature_diverges(self):
        # spin 1 with J = 1 orders below T = 4/3
        dist = qbdist.JDistribution.gaussian(100, "1")
        with pytest.raises(DivergentExpectationError):
            qbdist.expectation(dist, thermal_weight(100, 1.0, 1.2))

    def test_thermal_weight_above_critical_temperature(self):
        # the weight lowers the gaussian exponent from 3/(4N) to 1/(12N), a factor of 9
        dist = qbdist.JDistribution.gaussian(100, "1")
        value = qbdist.expectation(dist, thermal_weight(100, 1.0, 1.5))
        assert math.isclose(value, 27.0, rel_tol=1e-6), f"<exp(j^2/(N T))> should be 9^(3/2) = 27, got {value}"

    @pytest.mark.parametrize("spin, s, over_critical", [("1", 1.0, 1.05), ("1", 1.0, 1.4), ("1/2", 0.5, 1.2),
                                                        ("2", 2.0, 1.05)])
    def test_thermal_weight_just_above_critical_temperature(self, spin, s, over_critical):
        # the weighted density decays slowly and exp(j^2/(N T)) overflows soon after
        critical = 2 * s * (s + 1) / 3
        dist = qbdist.JDistribution.gaussian(100, spin)
        expected = (1 / (1 - 1 / over_critical)) ** 1.5
        value = qbdist.expectation(dist, thermal_weight(100, 1.0, over_critical * critical))
        assert math.isclose(value, expected, rel_tol=1e-6), \
            f"<exp(j^2/(N T))> at T = {over_critical} Tc for S={spin}:" + \
            f"\n- expected: {expected}" + \
            f"\n- got: {value}"

    def test_empty_bath_is_rejected(self):
        with pytest.raises(InvalidParameterError):
            qbdist.JDistribution.gaussian(0, "1")
