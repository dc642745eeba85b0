from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from qubath.bath.half_integer import HalfInteger
from qubath.exceptions import InvalidParameterError, TruncationLimitError
from qubath.series import CoherenceSeries

logger = logging.getLogger(__name__)

TAIL_WEIGHT = 1e-14
MAX_TERMS = 10 ** 7
CHUNK = 512


@dataclass(frozen=True)
class BosonParams:
    """
        Jaynes-Cummings limit of the XY bath: H_S = mu sigma_z, H_B = 2gS B^+B,
        H_SB = 2 alpha sqrt(2S) (sigma_- B^+ + sigma_+ B).

        Attributes
        ----------
        S : HalfInteger
            bath spin magnitude, enters the couplings only
        g, alpha, mu : float
            couplings as in the XY model
        beta : float
            inverse temperature, > 0
        n_max : int | None
            lower bound on the truncation of the thermal sum; the sum always runs at least to the
            smallest n whose tail weight is below 1e-14
    """
    S: HalfInteger
    g: float
    alpha: float
    mu: float
    beta: float
    n_max: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "S", HalfInteger.spin(self.S))
        if self.beta * self.g * float(self.S) <= 0:
            raise InvalidParameterError("beta*g*S", self.beta * self.g * float(self.S), "must be positive")
        if self.n_max is not None and self.n_max < 1:
            raise InvalidParameterError("n_max", self.n_max, "must be at least 1")

    @property
    def detuning(self) -> float:
        return self.g * float(self.S) - self.mu

    @property
    def boltzmann(self) -> float:
        # ratio of consecutive thermal weights, exp(-2 g S beta)
        return math.exp(-2 * self.g * float(self.S) * self.beta)


@dataclass(frozen=True)
class PropagatorEntry:
    """
        Diagonal propagator elements on the Fock state |n>.

        Attributes
        ----------
        n : int
        m1, m2 : float
            sqrt((gS - mu)^2 + 8 alpha^2 S n) and the same with n + 1
        u11, u22 : complex
            <n|U11(t)|n> and <n|U22(t)|n>
        u12_abs : float
            |<n+1|U12(t)|n>|
    """
    n: int
    m1: float
    m2: float
    u11: complex
    u22: complex
    u12_abs: float


def _frequencies(p: BosonParams, n):
    s = float(p.S)
    m1 = np.sqrt(p.detuning ** 2 + 8 * p.alpha ** 2 * s * n)
    m2 = np.sqrt(p.detuning ** 2 + 8 * p.alpha ** 2 * s * (n + 1))
    return m1, m2


def _sin_over(t, frequency):
    # sin(t M)/M, finite at M = 0
    return t * np.sinc(t * frequency / np.pi)


def _diagonal(p: BosonParams, n, t):
    s = float(p.S)
    m1, m2 = _frequencies(p, n)
    u11 = np.exp(-4j * p.g * t * s * (n - 0.5)) * (np.cos(t * m1) - 1j * p.detuning * _sin_over(t, m1))
    u22 = np.exp(-4j * p.g * t * s * (n + 0.5)) * (np.cos(t * m2) + 1j * p.detuning * _sin_over(t, m2))
    return m1, m2, u11, u22


def propagator_factors(p: BosonParams, n: int, t: float) -> PropagatorEntry:
    if n < 0:
        raise InvalidParameterError("n", n, "must be non-negative")
    m1, m2, u11, u22 = _diagonal(p, n, t)
    # coupling 2 alpha sqrt(2S(n+1)) keeps each two-level block unitary
    u12_abs = 2 * p.alpha * math.sqrt(2 * float(p.S)) * math.sqrt(n + 1) * abs(_sin_over(t, m2))
    return PropagatorEntry(n, float(m1), float(m2), complex(u11), complex(u22), float(u12_abs))


def partition_function(p: BosonParams) -> float:
    """Z = sum exp(-2 S g beta n) = 1 / (1 - exp(-2 S g beta))."""
    return 1 / (1 - p.boltzmann)


def truncation(p: BosonParams) -> int:
    """Largest n kept: the requested n_max, raised until the dropped weight is below TAIL_WEIGHT."""
    needed = max(math.ceil(math.log(TAIL_WEIGHT) / math.log(p.boltzmann)), 1)
    if p.n_max is not None and p.n_max > needed:
        needed = p.n_max
    if needed > MAX_TERMS:
        raise TruncationLimitError(needed, MAX_TERMS)
    return needed


def coherence_series(p: BosonParams, t_grid: ArrayLike) -> CoherenceSeries:
    """
        rho12(t)/rho12(0) = exp(-4igSt) sum_n e^{-2gS beta n} u11(n,t) conj(u22(n,t)).
        The weights are normalized by their truncated sum, so the ratio is 1 at t = 0.
    """
    n_max = truncation(p)
    if n_max > MAX_TERMS:
        raise TruncationLimitError(n_max, MAX_TERMS)

    times = np.asarray(t_grid, dtype=float)
    levels = np.arange(n_max + 1, dtype=float)
    weights = p.boltzmann ** levels
    normalization = weights.sum()
    s = float(p.S)

    ratio = np.zeros(len(times), dtype=complex)
    for start in range(0, len(levels), CHUNK):
        n = levels[start:start + CHUNK]
        _, _, u11, u22 = _diagonal(p, n[None, :], times[:, None])
        ratio += (u11 * np.conj(u22)) @ weights[start:start + CHUNK]
    ratio *= np.exp(-4j * p.g * s * times) / normalization

    tail = p.boltzmann ** (n_max + 1) / (1 - p.boltzmann) / partition_function(p)
    logger.debug("bosonic sum truncated at n=%d, tail weight %.3e", n_max, tail)
    return CoherenceSeries(times, ratio, diagnostics={"n_max": float(n_max), "tail_weight": tail})
