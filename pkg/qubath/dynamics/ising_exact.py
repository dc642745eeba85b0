from __future__ import annotations
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from numpy.typing import ArrayLike

from qubath.bath.half_integer import HalfInteger
import qubath.bath.degeneracy as qbdeg
import qubath.dynamics.ising_mf as qdimf
from qubath.exceptions import (DisorderedBathError, InsufficientGridError, InvalidParameterError,
                               MismatchedSpinError, TermBudgetError, UnsupportedSpinError)
from qubath.series import CoherenceSeries

logger = logging.getLogger(__name__)

TERM_BUDGET = 10 ** 5
DIRECT_BUDGET = 10 ** 6
FIT_WINDOW = 1.0
MIN_FIT_POINTS = 3
COMPARISON_WINDOW = 10.0
COMPARISON_POINTS = 401
MONOTONE_EPS = 1e-12


@dataclass(frozen=True)
class ExactIsingResult:
    """
        Attributes
        ----------
        series : CoherenceSeries
            g(t) on the requested grid
        revival_period : float
            2 pi sqrt(N) / J0, the period of |g|
        gaussian_fit_sigma : float
            sigma of |g| ~ exp(-sigma t^2) fitted on J0 t <= 1; nan when the grid is too coarse there
    """
    series: CoherenceSeries
    revival_period: float
    gaussian_fit_sigma: float


@dataclass(frozen=True)
class RevivalReport:
    period: float
    times: List[float]
    amplitudes: List[float]


@dataclass(frozen=True)
class ComparisonReport:
    """
        Exact and mean-field |g| on a shared grid of J0 t values.

        Attributes
        ----------
        times : numpy.Array
            real times; J0 t spans [0, 10] by default
        exact, meanfield : numpy.Array
            |g| from the degeneracy sum and from the mean-field closed form
        max_deviation : float
            largest |exact - meanfield|
        revival_amplitude : float
            |g_exact| one revival period after t = 0
        meanfield_monotone : bool
            whether the mean-field |g| never increases on the grid
        solution : MeanFieldSolution
    """
    times: np.ndarray
    exact: np.ndarray
    meanfield: np.ndarray
    max_deviation: float
    revival_amplitude: float
    meanfield_monotone: bool
    solution: qdimf.MeanFieldSolution
    diagnostics: dict = field(default_factory=dict)


def revival_period(p: qdimf.IsingParams) -> float:
    if p.J0 == 0:
        return math.inf
    return 2 * math.pi * math.sqrt(p.N) / abs(p.J0)


def _check_exact(p: qdimf.IsingParams, table: qbdeg.DegeneracyTable):
    if p.w != 0:
        raise InvalidParameterError("w", p.w, "the exact evolution needs a vanishing transverse field")
    if table.S != p.S:
        raise MismatchedSpinError(table.S, p.S)
    if table.N != p.N:
        raise InvalidParameterError("N", table.N, f"the degeneracy table must describe N={p.N} spins")
    if p.N * float(p.S) > TERM_BUDGET:
        raise TermBudgetError(p.N * p.S.twice_value + 1, TERM_BUDGET)


def projection_weights(table: qbdeg.DegeneracyTable):
    """
        dim F_l = sum of nu(j) over j >= |l|, for l = -NS..NS, as exact integers.
    """
    tail = 0
    upper = {}
    for j in reversed(table.admissible_js()):
        tail += table.nu(j)
        upper[j.twice_value] = tail
    twice_total = table.N * table.S.twice_value
    projections = [HalfInteger(twice) for twice in range(-twice_total, twice_total + 1, 2)]
    return projections, [upper[abs(l.twice_value)] for l in projections]


def _thermal_log_weights(p: qdimf.IsingParams, projections: np.ndarray, counts) -> np.ndarray:
    logs = np.array([math.log(count) for count in counts]) + p.beta * p.J * projections ** 2 / p.N
    return logs - logs.max()


def _oscillatory_sum(p: qdimf.IsingParams, projections: np.ndarray, weights: np.ndarray, times: np.ndarray):
    normalization = math.fsum(weights)
    ratio = np.empty(len(times), dtype=complex)
    scale = p.J0 / math.sqrt(p.N)
    for index, t in enumerate(times):
        phase = scale * t * projections
        real = math.fsum(weights * np.cos(phase))
        imaginary = math.fsum(weights * np.sin(phase))
        ratio[index] = complex(real, imaginary) / normalization
    return ratio * np.exp(-1j * p.mu * times)


def _gaussian_sigma(p: qdimf.IsingParams, series: CoherenceSeries) -> float:
    if p.J0 == 0:
        return 0.0
    window = (series.times <= FIT_WINDOW / abs(p.J0)) & (series.magnitude() > 0)
    if np.count_nonzero(window) < MIN_FIT_POINTS:
        return math.nan
    slope, _ = np.polyfit(series.times[window] ** 2, np.log(series.magnitude()[window]), 1)
    return -slope


def g_exact(p: qdimf.IsingParams, table: qbdeg.DegeneracyTable, t_grid: ArrayLike) -> ExactIsingResult:
    """
        g(t) = sum_l dim F_l exp(i J0 l t / sqrt(N) + beta J l^2 / N) / sum_l dim F_l exp(beta J l^2 / N),
        the multiplet sum over j collapsed onto projections l.
    """
    _check_exact(p, table)
    times = np.asarray(t_grid, dtype=float)
    projections, counts = projection_weights(table)
    levels = np.array([float(l) for l in projections])
    weights = np.exp(_thermal_log_weights(p, levels, counts))

    ratio = _oscillatory_sum(p, levels, weights, times)
    series = CoherenceSeries(times, ratio, diagnostics={"terms": float(len(levels))})
    logger.debug("exact g: N=%d S=%s, %d projections, %d times", p.N, p.S, len(levels), len(times))
    return ExactIsingResult(series, revival_period(p), _gaussian_sigma(p, series))


def g_exact_direct(p: qdimf.IsingParams, table: qbdeg.DegeneracyTable, t_grid: ArrayLike) -> CoherenceSeries:
    """The double sum over multiplets j and their projections l, term by term."""
    _check_exact(p, table)
    terms = sum(j.twice_value + 1 for j in table.js())
    if terms > DIRECT_BUDGET:
        raise TermBudgetError(terms, DIRECT_BUDGET)

    levels, counts = [], []
    for j in table.js():
        nu = table.nu(j)
        for twice_l in range(-j.twice_value, j.twice_value + 1, 2):
            levels.append(twice_l / 2)
            counts.append(nu)
    levels = np.array(levels)
    weights = np.exp(_thermal_log_weights(p, levels, counts))
    return CoherenceSeries(t_grid, _oscillatory_sum(p, levels, weights, np.asarray(t_grid, dtype=float)))


def g_high_temperature(p: qdimf.IsingParams, t: ArrayLike):
    """
        beta -> 0 limits: cos^N(J0 t / 2 sqrt(N)) for S = 1/2 and 3^-N [1 + 2 cos(J0 t / sqrt(N))]^N for S = 1.
    """
    t = np.asarray(t, dtype=float)
    argument = p.J0 * t / math.sqrt(p.N)
    if p.S == HalfInteger(1):
        value = np.cos(argument / 2) ** p.N
    elif p.S == HalfInteger(2):
        value = ((1 + 2 * np.cos(argument)) / 3) ** p.N
    else:
        raise UnsupportedSpinError(p.S, (HalfInteger(1), HalfInteger(2)))
    return float(value) if value.ndim == 0 else value


def gaussian_law(S, J0: float, t: ArrayLike):
    """Large-N, high-temperature decay exp(-S(S+1) J0^2 t^2 / 6)."""
    spin = HalfInteger.spin(S)
    value = np.exp(-spin.casimir * J0 ** 2 * np.asarray(t, dtype=float) ** 2 / 6)
    return float(value) if value.ndim == 0 else value


def revival_diagnostics(result: ExactIsingResult) -> RevivalReport:
    """Maxima of |g| within a quarter period of every multiple of the revival period."""
    period = result.revival_period
    times = result.series.times
    if not math.isfinite(period) or len(times) < 2 or times[-1] - times[0] < 2 * period:
        raise InsufficientGridError(f"the grid must span two revival periods of {period:.6g}")

    magnitude = result.series.magnitude()
    peaks, amplitudes = [], []
    for k in range(max(1, math.ceil(times[0] / period)), int(times[-1] // period) + 1):
        window = np.abs(times - k * period) <= period / 4
        if not np.any(window):
            continue
        best = np.flatnonzero(window)[np.argmax(magnitude[window])]
        peaks.append(float(times[best]))
        amplitudes.append(float(magnitude[best]))
    return RevivalReport(period, peaks, amplitudes)


def oscillation_strength(result: ExactIsingResult) -> float:
    """Variance of |g|^2 over the first revival period, a measure of the intermediate-time oscillations."""
    times = result.series.times
    window = times <= result.revival_period
    return float(np.var(result.series.magnitude()[window] ** 2))


def meanfield_vs_exact(p: qdimf.IsingParams, t_grid: Optional[ArrayLike] = None,
                       table: Optional[qbdeg.DegeneracyTable] = None) -> ComparisonReport:
    solution = qdimf.solve_order_parameter(p)
    if not solution.ordered:
        raise DisorderedBathError(p.T, solution.Tc)
    if t_grid is None:
        t_grid = np.linspace(0, COMPARISON_WINDOW, COMPARISON_POINTS) / abs(p.J0)
    table = table if table is not None else qbdeg.cached_degeneracy_table(p.N, p.S)

    times = np.asarray(t_grid, dtype=float)
    exact = g_exact(p, table, times).series.magnitude()
    meanfield = qdimf.g_meanfield(p, solution, times).magnitude()
    revival = g_exact(p, table, [revival_period(p)]).series.magnitude()[0]

    deviation = float(np.max(np.abs(exact - meanfield)))
    monotone = bool(np.all(np.diff(meanfield) <= MONOTONE_EPS))
    logger.info("mean field vs exact at N=%d S=%s T=%g: max deviation %.4f", p.N, p.S, p.T, deviation)
    return ComparisonReport(times, exact, meanfield, deviation, float(revival), monotone, solution,
                            {"m": solution.m, "decay_valid": float(bool(solution.decay_valid))})
