from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize, special
from scipy.linalg import expm

from qubath.bath.half_integer import HalfInteger
import qubath.bath.spin_algebra as qbspin
from qubath.exceptions import (InvalidParameterError, RootFindingError, UnsupportedSpinError,
                               ZeroCrossingError)
from qubath.series import CoherenceSeries

logger = logging.getLogger(__name__)

SCAN_POINTS = 256
ROOT_XTOL = 1e-12
ROOT_MAXITER = 200
SMALL_ARGUMENT = 1e-6
zero_eps = 1e-12
SUPPORTED_SPINS = (HalfInteger(2), HalfInteger(3), HalfInteger(4))
MAX_ORACLE_TWICE_SPIN = 8


class GMethod(Enum):
    AUTO = "auto"
    CLOSED_FORM = "closed-form"
    TRACE = "trace"


@dataclass(frozen=True)
class IsingParams:
    """
        Parameters of the qubit coupled to a transverse-field Ising bath with infinite-range couplings.

        Attributes
        ----------
        N : int
            number of bath spins
        S : HalfInteger
            bath spin magnitude
        J : float
            intra-bath ferromagnetic coupling, > 0
        J0 : float
            qubit-bath coupling
        w : float
            transverse field, >= 0
        T : float
            bath temperature, k_B = 1
        mu : float
            field on the qubit; contributes the phase exp(-i mu t) only

        Methods
        -------
        beta() -> float:
            inverse temperature 1/T
        with_temperature(T: float) -> IsingParams:
            a copy at another temperature
    """
    N: int
    S: HalfInteger
    J: float
    J0: float
    w: float
    T: float
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "S", HalfInteger.spin(self.S))
        if self.N < 1:
            raise InvalidParameterError("N", self.N, "at least one spin is required")
        if self.J <= 0:
            raise InvalidParameterError("J", self.J, "must be positive")
        if self.T <= 0:
            raise InvalidParameterError("T", self.T, "must be positive")
        if self.w < 0:
            raise InvalidParameterError("w", self.w, "must be non-negative")

    @property
    def beta(self) -> float:
        return 1 / self.T

    def with_temperature(self, T: float) -> IsingParams:
        return IsingParams(self.N, self.S, self.J, self.J0, self.w, T, self.mu)


@dataclass(frozen=True)
class MeanFieldSolution:
    """
        Attributes
        ----------
        m : float
            order parameter, 0 <= m <= S
        Theta : float
            effective field sqrt(w^2 + 4 J^2 m^2)
        Tc : float
            critical temperature 2JS(S+1)/3
        ordered : bool
            whether the bath is in its ordered phase
        decay_valid : bool | None
            whether the gaussian decay condition holds; None when no closed form exists for S
        iterations : int
            root finder iterations, 0 when no nontrivial root was found
    """
    m: float
    Theta: float
    Tc: float
    ordered: bool
    decay_valid: Optional[bool]
    iterations: int = 0


def effective_field(p: IsingParams, m: float) -> float:
    return math.hypot(p.w, 2 * p.J * m)


def _levels(spin: HalfInteger) -> np.ndarray:
    return float(spin) - np.arange(spin.dimension)


def partition_function(p: IsingParams, m: float) -> float:
    """
        ln Z_N = -beta m^2 J N + N ln sum_l exp(l beta Theta), l = -S..S.
        For integer S the sum is 1 + 2 cosh((S+1) beta Theta/2) sinh(S beta Theta/2)/sinh(beta Theta/2).
    """
    if m < 0:
        raise InvalidParameterError("m", m, "must be non-negative")
    x = p.beta * effective_field(p, m)
    return -p.beta * m * m * p.J * p.N + p.N * float(special.logsumexp(_levels(p.S) * x))


def free_energy(p: IsingParams, m: float) -> float:
    """F = -ln(Z_N) / (N beta), per bath spin."""
    return -partition_function(p, m) / (p.N * p.beta)


def critical_temperature(p: IsingParams) -> float:
    return 2 * p.J * p.S.casimir / 3


def self_consistency_rhs(S, x: ArrayLike):
    """
        2<l> in the single-site law exp(l x), the right-hand side of Theta/J = f(beta Theta).
    """
    spin = HalfInteger.spin(S)
    levels = _levels(spin)
    x = np.asarray(x, dtype=float)
    grid = np.atleast_1d(x)[:, None]

    # small x: pair +l with -l to avoid cancellation
    positive = levels[levels > 0]
    paired = (2 * positive * np.sinh(np.minimum(grid, 1.0) * positive)).sum(axis=1)
    direct = np.exp(np.minimum(grid, 1.0) * levels).sum(axis=1)

    shifted = np.exp(np.maximum(grid, 1.0) * (levels - float(spin)))
    mean = (levels * shifted).sum(axis=1) / shifted.sum(axis=1)

    result = 2 * np.where(np.atleast_1d(x) < 1.0, paired / direct, mean)
    return float(result[0]) if x.ndim == 0 else result


def self_consistency_rhs_closed(S, x: float) -> float:
    """[S sinh((S+1)x) - (S+1) sinh(Sx)] / [sinh(x/2) sinh((2S+1)x/2)]."""
    s = float(HalfInteger.spin(S))
    if abs(x) < SMALL_ARGUMENT:
        return 2 * x * s * (s + 1) / 3
    return (s * math.sinh((s + 1) * x) - (s + 1) * math.sinh(s * x)) / (math.sinh(x / 2) * math.sinh((2 * s + 1) * x / 2))


def _mismatch(p: IsingParams, theta):
    return np.asarray(theta) / p.J - self_consistency_rhs(p.S, p.beta * np.asarray(theta))


def _largest_root(p: IsingParams) -> Tuple[Optional[float], int]:
    upper = 2 * p.J * float(p.S)
    lower = p.w if p.w > 0 else upper * 1e-9
    if lower >= upper:
        return None, 0

    scan = np.geomspace(lower, upper, SCAN_POINTS)
    values = _mismatch(p, scan)
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    if len(changes) == 0:
        return None, 0

    index = changes[-1]
    a, b = float(scan[index]), float(scan[index + 1])
    if values[index + 1] == 0:
        return b, 0
    root, result = optimize.brentq(lambda theta: float(_mismatch(p, theta)), a, b, xtol=ROOT_XTOL,
                                   maxiter=ROOT_MAXITER, full_output=True, disp=False)
    if not result.converged:
        raise RootFindingError((a, b), result.iterations)
    return root, result.iterations


def is_ordered(p: IsingParams) -> bool:
    """Ordered phase: T < Tc at w = 0, otherwise w/J below the self-consistency right-hand side at Theta = w."""
    if p.w == 0:
        return p.T < critical_temperature(p)
    return p.w / p.J < self_consistency_rhs(p.S, p.beta * p.w)


def solve_order_parameter(p: IsingParams) -> MeanFieldSolution:
    tc = critical_temperature(p)
    root, iterations = _largest_root(p)
    if root is None or root <= p.w:
        m, theta = 0.0, p.w
    else:
        m = math.sqrt(max(root * root - p.w * p.w, 0.0)) / (2 * p.J)
        theta = root

    candidate = MeanFieldSolution(m, theta, tc, is_ordered(p), None, iterations)
    decay_valid = gaussian_validity(p, candidate) if p.S in SUPPORTED_SPINS else None
    logger.debug("mean field S=%s T=%g: m=%.6f Theta=%.6f after %d iterations", p.S, p.T, m, theta, iterations)
    return MeanFieldSolution(m, theta, tc, candidate.ordered, decay_valid, iterations)


def _require_closed_form(spin: HalfInteger):
    if spin not in SUPPORTED_SPINS:
        raise UnsupportedSpinError(spin, SUPPORTED_SPINS)


def _damped(p: IsingParams, sol: MeanFieldSolution) -> float:
    # exp(-beta Theta); every closed form below is written in this variable to stay finite at low T
    return math.exp(-p.beta * sol.Theta)


def _decay_coefficients(spin: HalfInteger, e: float) -> Tuple[float, float, float]:
    """
        (prefactor, A, B) of the N -> infinity law |g|^2 = exp(-m^2 J0^2 t^2 prefactor (A J^2/Theta^2 - B)).
    """
    if spin == HalfInteger(2):
        norm = 1 + e + e * e
        return 2 * (1 + e) ** 2 / norm ** 2, norm, 1 + 3 * e + e * e
    if spin == HalfInteger(3):
        a = 1.5 * (1 + e ** 4) + 2 * e * (1 + e * e) + 3 * e * e
        b = 1.5 * (1 + e ** 4) + 6 * e * (1 + e * e) + 11 * e * e
        return 2 / (1 + e * e) ** 2, a, b
    norm = 1 + e + e ** 2 + e ** 3 + e ** 4
    a = 5 * e ** 3 + 5 * e ** 2 * (1 + e ** 2) + 3 * e * (1 + e ** 4) + 2 * (1 + e ** 6)
    b = 31 * e ** 3 + 21 * e ** 2 * (1 + e ** 2) + 9 * e * (1 + e ** 4) + 2 * (1 + e ** 6)
    return 2 * (1 + e) ** 2 / norm ** 2, a, b


def validity_bound(p: IsingParams, sol: MeanFieldSolution) -> float:
    """Upper bound on Theta^2/J^2 for a decaying |g|."""
    _require_closed_form(p.S)
    _, a, b = _decay_coefficients(p.S, _damped(p, sol))
    return a / b


def gaussian_validity(p: IsingParams, sol: MeanFieldSolution) -> bool:
    return (sol.Theta / p.J) ** 2 < validity_bound(p, sol)


def _decay_rate(p: IsingParams, sol: MeanFieldSolution) -> float:
    # exponent of the N -> infinity law per unit t^2, negative once the validity condition fails
    _require_closed_form(p.S)
    if sol.m == 0:
        return 0.0
    prefactor, a, b = _decay_coefficients(p.S, _damped(p, sol))
    return sol.m ** 2 * p.J0 ** 2 * prefactor * (a * (p.J / sol.Theta) ** 2 - b)


def g_meanfield_limit(p: IsingParams, sol: MeanFieldSolution, t: ArrayLike):
    """N -> infinity limit of |g(t)|^2; exceeds 1 for t > 0 when the validity condition fails."""
    t = np.asarray(t, dtype=float)
    value = np.exp(-_decay_rate(p, sol) * t ** 2)
    return float(value) if value.ndim == 0 else value


def g_meanfield_expansion(p: IsingParams, sol: MeanFieldSolution, t: ArrayLike):
    """|g(t)|^2 to first order in 1/N inside the N-th power: (1 - rate t^2 / N)^N."""
    t = np.asarray(t, dtype=float)
    value = (1 - _decay_rate(p, sol) * t ** 2 / p.N) ** p.N
    return float(value) if value.ndim == 0 else value


def site_factor(p: IsingParams, sol: MeanFieldSolution, t: ArrayLike) -> np.ndarray:
    """
        Per-site factor f(t) of g(t) = f(t)^N in closed form, with Z = cos(a) + i (Theta/J) sin(a),
        a = J J0 m t / (Theta sqrt(N)).
    """
    _require_closed_form(p.S)
    times = np.asarray(t, dtype=float)
    if sol.Theta == 0:
        return np.ones_like(times, dtype=complex)

    angle = p.J * p.J0 * sol.m * times / (sol.Theta * math.sqrt(p.N))
    z = np.cos(angle) + 1j * sol.Theta / p.J * np.sin(angle)
    e = _damped(p, sol)
    scaled = (1 + e) ** 2 * z * z

    if p.S == HalfInteger(2):
        return (scaled - e) / (1 + e + e * e)
    if p.S == HalfInteger(3):
        return (1 + e) * z * (scaled - 2 * e) / (1 + e + e ** 2 + e ** 3)
    return (scaled * scaled - 3 * e * scaled + e * e) / (1 + e + e ** 2 + e ** 3 + e ** 4)


def site_trace_oracle(params: IsingParams, m: float, t: Union[float, ArrayLike]):
    """
        One per-site factor of the mean-field decoherence function g(t), evaluated with dense
        matrix exponentials of the two unitary exponents and the thermal one, divided by the
        single-site partition factor sum_l exp(l*beta*Theta).
    """
    spin = params.S
    if spin.twice_value > MAX_ORACLE_TWICE_SPIN:
        raise InvalidParameterError("S", spin, f"2S must not exceed {MAX_ORACLE_TWICE_SPIN}")

    matrices = qbspin.build_spin_matrices(spin)
    sx, sz = matrices.sx, matrices.sz
    coupling = params.J0 / (2 * math.sqrt(params.N))
    field = 2 * params.J * m
    theta = math.hypot(params.w, field)
    beta = params.beta

    # shifted by exp(-beta*S*Theta) in both the thermal matrix and its normalization
    shift = float(spin) * beta * theta
    thermal = expm(beta * (params.w * sx + field * sz) - shift * np.eye(spin.dimension))
    levels = float(spin) - np.arange(spin.dimension)
    site_partition = np.exp(levels * beta * theta - shift).sum()

    forward = (coupling + field) * sz + params.w * sx
    backward = (coupling - field) * sz - params.w * sx

    def factor(time: float) -> complex:
        product = expm(1j * time * forward) @ thermal @ expm(1j * time * backward)
        return complex(np.trace(product) / site_partition)

    if np.ndim(t) == 0:
        return factor(float(t))
    return np.array([factor(float(time)) for time in np.asarray(t, dtype=float)])


def _resolve(method, spin: HalfInteger) -> GMethod:
    method = GMethod(method)
    if method == GMethod.AUTO:
        return GMethod.CLOSED_FORM if spin in SUPPORTED_SPINS else GMethod.TRACE
    return method


def g_meanfield(p: IsingParams, sol: MeanFieldSolution, t_grid: ArrayLike,
                method=GMethod.AUTO) -> CoherenceSeries:
    """
        g(t) = f(t)^N e^{-i mu t}, with f from the closed forms (S = 1, 3/2, 2) or from the
        dense per-site trace for any other S.
    """
    times = np.asarray(t_grid, dtype=float)
    method = _resolve(method, p.S)
    if method == GMethod.CLOSED_FORM:
        factor = site_factor(p, sol, times)
    else:
        factor = np.atleast_1d(site_trace_oracle(p, sol.m, times))

    small = np.abs(factor) < zero_eps
    if np.any(small):
        raise ZeroCrossingError(float(times[np.argmax(small)]))

    ratio = np.exp(p.N * np.log(factor) - 1j * p.mu * times)
    return CoherenceSeries(times, ratio, diagnostics={"m": sol.m, "Theta": sol.Theta,
                                                      "ordered": float(sol.ordered),
                                                      "decay_valid": float(bool(sol.decay_valid)),
                                                      "method": method.value})
