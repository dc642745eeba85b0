import math

import numpy as np
import pytest

import qubath.dynamics.hp_boson as qdboson
from qubath.exceptions import InvalidParameterError, TruncationLimitError


def boson_params(S="5", g=1.0, alpha=0.5, mu=3.0, beta=0.01, n_max=None):
    return qdboson.BosonParams(S, g, alpha, mu, beta, n_max)


def late_mean(S):
    params = boson_params(S)
    # times in units of 1/alpha
    grid = np.linspace(20, 40, 801)
    return qdboson.coherence_series(params, grid / params.alpha).magnitude().mean()


class TestPropagator:

    @pytest.mark.parametrize("n", [0, 1, 7, 100])
    @pytest.mark.parametrize("t", [0.0, 0.3, 2.0, 17.5])
    def test_two_level_blocks_are_unitary(self, n, t):
        params = boson_params("8")
        entry = qdboson.propagator_factors(params, n, t)
        norm = abs(entry.u22) ** 2 + entry.u12_abs ** 2
        assert math.isclose(norm, 1.0, abs_tol=1e-12), \
            f"|U22|^2 + |U12|^2 should be 1 at n={n}, t={t}:" + \
            f"\n- got: {norm}"

    def test_identity_at_time_zero(self):
        entry = qdboson.propagator_factors(boson_params(), 4, 0.0)
        assert entry.u11 == 1 and entry.u22 == 1 and entry.u12_abs == 0, f"U(0) should be the identity, got {entry}"

    def test_negative_occupation(self):
        with pytest.raises(InvalidParameterError):
            qdboson.propagator_factors(boson_params(), -1, 1.0)


class TestCoherenceSeries:

    @pytest.mark.parametrize("S", ["1/2", "5", "12"])
    def test_coherence_starts_at_one(self, S):
        series = qdboson.coherence_series(boson_params(S), [0.0, 1.0])
        assert abs(series.ratio12[0] - 1) < 1e-13, f"ratio at t = 0 should be 1 for S={S}, got {series.ratio12[0]}"

    def test_decoupled_qubit_keeps_its_coherence(self):
        series = qdboson.coherence_series(boson_params(alpha=0.0), np.linspace(0, 30, 31))
        assert np.allclose(series.magnitude(), 1.0, atol=1e-12), \
            f"without coupling |rho12| stays at its initial value, got {series.magnitude()}"

    def test_truncation_is_converged(self):
        params = boson_params("8")
        n_max = qdboson.truncation(params)
        times = np.linspace(0, 60, 121)
        default = qdboson.coherence_series(params, times)
        doubled = qdboson.coherence_series(boson_params("8", n_max=2 * n_max), times)
        gap = np.max(np.abs(default.ratio12 - doubled.ratio12))
        assert gap < 1e-10, f"doubling n_max={n_max} should not change the result, changed by {gap}"
        assert default.diagnostics["tail_weight"] <= qdboson.TAIL_WEIGHT, "discarded thermal weight is too large"

    @pytest.mark.parametrize("requested", [1, 2, 50])
    def test_small_n_max_is_raised_to_converge(self, requested):
        # exp(-2 g S beta) = exp(-0.1): hundreds of thermal terms carry weight
        params = boson_params("5", n_max=requested)
        automatic = qdboson.truncation(boson_params("5"))
        n_max = qdboson.truncation(params)
        assert n_max == automatic, \
            f"n_max={requested} is a lower bound and should grow to the converged truncation:" + \
            f"\n- expected: {automatic}" + \
            f"\n- got: {n_max}"
        series = qdboson.coherence_series(params, [0.0, 5.0])
        assert series.diagnostics["tail_weight"] <= qdboson.TAIL_WEIGHT, \
            f"discarded thermal weight should be below {qdboson.TAIL_WEIGHT}, got {series.diagnostics['tail_weight']}"

    def test_large_n_max_is_kept(self):
        automatic = qdboson.truncation(boson_params("5"))
        assert qdboson.truncation(boson_params("5", n_max=3 * automatic)) == 3 * automatic, \
            "an n_max above the converged truncation should be used as given"

    @pytest.mark.parametrize("S", ["1/2", "5", "8", "12"])
    def test_coherence_never_exceeds_one(self, S):
        series = qdboson.coherence_series(boson_params(S), np.linspace(0, 200, 2001))
        largest = series.magnitude().max()
        assert largest <= 1 + 1e-12, f"|rho12(t)/rho12(0)| is bounded by 1 for S={S}, got {largest}"

    @pytest.mark.parametrize("S", ["5", "8"])
    def test_short_times_do_not_depend_on_spin(self, S):
        # 2S <n> = 1/(g beta) does not depend on S, so the initial decay is shared
        params = boson_params(S)
        doubled = boson_params(str(2 * int(S)))
        times = np.linspace(0, 0.05 / (params.alpha * math.sqrt(float(params.S))), 41)
        first = qdboson.coherence_series(params, times).magnitude()
        second = qdboson.coherence_series(doubled, times).magnitude()
        gap = np.max(np.abs(first - second) / first)
        assert gap < 0.05, \
            f"|rho12| at short times for S={S} and S={2 * int(S)}:" + \
            f"\n- expected: relative gap below 0.05" + \
            f"\n- got: {gap}"

    def test_oscillation_persists_at_long_times(self):
        params = boson_params("5")
        grid = np.linspace(20, 40, 801) / params.alpha
        late = qdboson.coherence_series(params, grid).magnitude()
        spread = np.ptp(late)
        assert spread > 1e-3, \
            "|rho12| should keep oscillating instead of settling on a constant:" + \
            f"\n- got: max - min = {spread} over alpha t in [20, 40]"

    def test_late_coherence_grows_with_spin(self):
        means = [late_mean(S) for S in ("5", "8", "12")]
        assert means[0] < means[1] < means[2], \
            "late-time |rho12| should be larger for larger spins:" + \
            f"\n- S = 5, 8, 12: {means}"

    def test_partition_function(self):
        params = boson_params("5", beta=0.01)
        expected = 1 / (1 - math.exp(-0.1))
        assert math.isclose(qdboson.partition_function(params), expected), "Z = 1/(1 - exp(-2 g S beta))"

    def test_high_temperature_exceeds_term_cap(self):
        with pytest.raises(TruncationLimitError):
            qdboson.coherence_series(boson_params("1/2", beta=1e-9), [0.0])

    @pytest.mark.parametrize("kwargs", [{"beta": 0.0}, {"g": -1.0}, {"n_max": 0}])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(InvalidParameterError):
            boson_params(**kwargs)
