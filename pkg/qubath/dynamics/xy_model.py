from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import mpmath
import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate, special

from qubath.bath.half_integer import HalfInteger
import qubath.bath.distribution as qbdist
import qubath.dynamics.quadrature as qdquad
from qubath.exceptions import InsufficientGridError, InvalidDensityMatrixError, InvalidParameterError, QuadratureError
from qubath.series import CoherenceSeries

logger = logging.getLogger(__name__)

LOW_ORDER = 12
HIGH_ORDER = 20
EVOLUTION_TOLERANCE = 1e-8
TAIL_EXPONENT = 50.0
ERFCX_SWITCH = 5.0
MIN_FIT_POINTS = 20
FIT_WINDOW = 0.2
density_eps = 1e-10


@dataclass(frozen=True)
class XYParams:
    """
        Parameters of the Heisenberg-XY coupled qubit.

        Attributes
        ----------
        mu : float
            half the field strength acting on the qubit
        alpha : float
            qubit-bath coupling, > 0
        g : float
            intra-bath XY coupling, > 0
        beta : float
            inverse bath temperature, >= 0
        N : int
            number of bath spins
        S : HalfInteger
            bath spin magnitude
        theta : float
            surrogate m^2 ~ theta j^2, in [0, 1); 0 unless reproducing intermediate expressions
    """
    mu: float
    alpha: float
    g: float
    beta: float
    N: int
    S: HalfInteger
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "S", HalfInteger.spin(self.S))
        if self.alpha <= 0:
            raise InvalidParameterError("alpha", self.alpha, "must be positive")
        if self.g <= 0:
            raise InvalidParameterError("g", self.g, "must be positive")
        if self.beta < 0:
            raise InvalidParameterError("beta", self.beta, "must be non-negative")
        if not 0 <= self.theta < 1:
            raise InvalidParameterError("theta", self.theta, "must lie in [0, 1)")
        if self.N < 1:
            raise InvalidParameterError("N", self.N, "at least one spin is required")

    @property
    def coupling_squared(self) -> float:
        return self.alpha ** 2 * (1 - self.theta)

    @property
    def damping(self) -> float:
        # exponent of the thermal weight exp(-damping * j^2 / N)
        return self.g * self.beta * (1 - self.theta)

    @property
    def spread(self) -> float:
        # beta*g + 3/(2(1-theta)S(S+1)), the combination governing all asymptotics
        return self.g * self.beta + 3 / (2 * (1 - self.theta) * self.S.casimir)


@dataclass(frozen=True)
class DecoherenceTime:
    tau: float
    tau_min: float
    degenerate: bool


@dataclass(frozen=True)
class ShortTimeFit:
    tau: float
    tau_d: float
    points: int

    @property
    def ratio(self) -> float:
        return self.tau / self.tau_d


def bath_partition(p: XYParams) -> float:
    """Z = [1 + 2 S(S+1) g beta (1 - theta) / 3]^(-3/2)."""
    return (1 + 2 * p.S.casimir * p.damping / 3) ** -1.5


def _validate_density_matrix(rho0: ArrayLike) -> np.ndarray:
    rho = np.asarray(rho0, dtype=complex)
    if rho.shape != (2, 2):
        raise InvalidDensityMatrixError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=density_eps):
        raise InvalidDensityMatrixError("matrix is not hermitian")
    if abs(np.trace(rho) - 1) > density_eps:
        raise InvalidDensityMatrixError(f"trace is {np.trace(rho).real}, not 1")
    if np.linalg.eigvalsh(rho).min() < -density_eps:
        raise InvalidDensityMatrixError("matrix is not positive semidefinite")
    return rho


def _cutoff(p: XYParams) -> float:
    # weighted density decays as exp(-(3/(2S(S+1)) + damping) j^2 / N)
    exponent = (3 / (2 * p.S.casimir) + p.damping) / p.N
    return math.sqrt(TAIL_EXPONENT / exponent)


def _panel_width(p: XYParams, t: float, upper: float) -> float:
    # quarter of the shortest local period of exp(2 i t Omega(j)) in j
    slope = math.sqrt(p.coupling_squared / p.N)
    if t * slope == 0:
        return upper
    return math.pi / (4 * abs(t) * slope)


def _brackets(p: XYParams, j: np.ndarray, t: float):
    energy = p.coupling_squared * j ** 2 / p.N
    omega = np.sqrt(p.mu ** 2 + energy)
    sine = np.sin(t * omega) ** 2
    cosine = np.cos(t * omega) ** 2
    field_share = np.divide(p.mu ** 2, omega ** 2, out=np.zeros_like(omega), where=omega > 0)
    bath_share = np.divide(energy, omega ** 2, out=np.ones_like(omega), where=omega > 0)
    phase = np.divide(p.mu, omega, out=np.zeros_like(omega), where=omega > 0) * np.sin(2 * t * omega)

    coherence = cosine - field_share * sine + 1j * phase
    keep = cosine + field_share * sine
    transfer = bath_share * sine
    return coherence, keep, transfer


def _evolve_point(p: XYParams, t: float, upper: float, order: int) -> Tuple[complex, float, float]:
    nodes, weights = qdquad.panel_rule(upper, _panel_width(p, t, upper), order)
    measure = weights * qbdist.gaussian_pdf(p.N, p.S, nodes) * np.exp(-p.damping * nodes ** 2 / p.N)
    coherence, keep, transfer = _brackets(p, nodes, t)
    return measure @ coherence, float(measure @ keep), float(measure @ transfer)


def coherence_evolution(p: XYParams, rho0: ArrayLike, t_grid: ArrayLike) -> CoherenceSeries:
    rho = _validate_density_matrix(rho0)
    times = np.asarray(t_grid, dtype=float)
    if not np.all(np.isfinite(times)):
        raise InsufficientGridError("time grid contains non-finite values")

    partition = bath_partition(p)
    upper = _cutoff(p)
    ratio = np.empty(len(times), dtype=complex)
    pop11 = np.empty(len(times))
    worst_error, worst_time = 0.0, 0.0

    for index, t in enumerate(times):
        coherence, keep, transfer = _evolve_point(p, t, upper, HIGH_ORDER)
        coarse, *_ = _evolve_point(p, t, upper, LOW_ORDER)
        error = abs(coherence - coarse) / partition
        if error > worst_error:
            worst_error, worst_time = error, t
        ratio[index] = coherence / partition
        pop11[index] = (rho[0, 0].real * keep + rho[1, 1].real * transfer) / partition

    if worst_error > EVOLUTION_TOLERANCE:
        raise QuadratureError(ratio[times == worst_time][0], worst_error, f"t={worst_time:.6g}")
    logger.debug("xy evolution: %d points, worst panel error %.3e at t=%.4g", len(times), worst_error, worst_time)
    return CoherenceSeries(times, ratio, pop11, {"quadrature_error": worst_error, "worst_time": worst_time})


def asymptotic_coherence(p: XYParams) -> float:
    """
        Long-time coherence psi: the time average of the rho12 integrand, cos^2 and sin^2 -> 1/2
        and sin -> 0, leaves (alpha^2 (1-theta) j^2/N) / (2 Omega^2) under the weighted P(j).
    """
    if p.mu == 0:
        return 0.5

    partition = bath_partition(p)

    def integrand(j):
        energy = p.coupling_squared * j * j / p.N
        weight = qbdist.gaussian_pdf(p.N, p.S, j) * math.exp(-p.damping * j * j / p.N)
        return weight * energy / (2 * (p.mu ** 2 + energy))

    value, error = integrate.quad(integrand, 0, _cutoff(p), epsabs=1e-15, epsrel=1e-12, limit=400)
    if error > 1e-10 * max(value, 1e-300):
        raise QuadratureError(value / partition, error / partition, "time-averaged integrand")
    return value / partition


def _psi_closed(x: float) -> float:
    # psi = 1/2 - x^2 + sqrt(pi) x^3 exp(x^2) erfc(x)
    if x <= ERFCX_SWITCH:
        return 0.5 - x * x + math.sqrt(math.pi) * x ** 3 * float(special.erfcx(x))
    # the three terms cancel to O(1/x^2); extra digits cover the loss
    with mpmath.workdps(30 + int(4 * math.log10(x))):
        X = mpmath.mpf(x)
        value = mpmath.mpf(1) / 2 - X ** 2 + mpmath.sqrt(mpmath.pi) * X ** 3 * mpmath.exp(X ** 2) * mpmath.erfc(X)
        return float(value)


def asymptotic_coherence_closed_form(p: XYParams) -> float:
    if p.mu == 0:
        return 0.5
    return _psi_closed(abs(p.mu) / p.alpha * math.sqrt(p.spread))


def large_S_asymptote(mu_over_alpha: float, beta_g: float) -> float:
    if beta_g <= 0:
        raise InvalidParameterError("beta_g", beta_g, "must be positive")
    if mu_over_alpha == 0:
        return 0.5
    return _psi_closed(abs(mu_over_alpha) * math.sqrt(beta_g))


def asymptotic_population(p: XYParams, rho0: ArrayLike) -> float:
    rho = _validate_density_matrix(rho0)
    psi = asymptotic_coherence(p)
    return rho[0, 0].real * (1 - psi) + rho[1, 1].real * psi


def decoherence_time(p: XYParams) -> DecoherenceTime:
    tau = math.sqrt(p.beta * p.g + 3 / (2 * p.S.casimir)) / p.alpha
    tau_min = math.sqrt(p.beta * p.g) / p.alpha
    return DecoherenceTime(tau, tau_min, tau_min == 0)


def short_time_check(series: CoherenceSeries, p: XYParams) -> ShortTimeFit:
    """
        Least-squares fit of ln|rho12(t)/rho12(0)| against t^2 on [0, 0.2 tau_D].
        For the weighted P(j) the fitted constant is sqrt(2/3) tau_D.
    """
    tau_d = decoherence_time(p).tau
    window = series.times <= FIT_WINDOW * tau_d
    if np.count_nonzero(window) < MIN_FIT_POINTS or series.times.min() > 0:
        raise InsufficientGridError(f"need {MIN_FIT_POINTS} points on [0, {FIT_WINDOW * tau_d:.6g}]")

    slope, _ = np.polyfit(series.times[window] ** 2, np.log(series.magnitude()[window]), 1)
    if slope >= 0:
        raise InsufficientGridError("coherence does not decay on the fitting window")
    return ShortTimeFit(math.sqrt(-1 / slope), tau_d, int(np.count_nonzero(window)))
