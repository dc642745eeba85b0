from __future__ import annotations
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict

import numpy as np
from numpy.typing import ArrayLike

from qubath.bath.half_integer import HalfInteger
from qubath.exceptions import EnumerationLimitError
from qubath.series import CoherenceSeries

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 10 ** 6
MULTIPLICITY_LIMIT = 3 ** 8
degenerate_eps = 1e-14


@dataclass(frozen=True)
class SpinMatrices:
    """
        Dense spin-S matrices in the S_z eigenbasis, eigenvalues ordered S, S-1, ..., -S.

        Attributes
        ----------
        spin : HalfInteger
            spin magnitude S
        sx, sy, sz : numpy.Array
            complex (2S+1)x(2S+1) hermitian matrices, hbar = 1
    """
    spin: HalfInteger
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def dimension(self) -> int:
        return self.spin.dimension

    def splus(self) -> np.ndarray:
        return self.sx + 1j * self.sy

    def sminus(self) -> np.ndarray:
        return self.sx - 1j * self.sy


def build_spin_matrices(spin) -> SpinMatrices:
    spin = HalfInteger.spin(spin)
    s = float(spin)
    dimension = spin.dimension
    projections = s - np.arange(dimension)

    # S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>, row k holds m = S - k
    raising = np.zeros((dimension, dimension), dtype=complex)
    for k in range(1, dimension):
        m = projections[k]
        raising[k - 1, k] = math.sqrt(s * (s + 1) - m * (m + 1))
    lowering = raising.conj().T

    sx = (raising + lowering) / 2
    sy = (raising - lowering) / 2j
    sz = np.diag(projections).astype(complex)
    return SpinMatrices(spin, sx, sy, sz)


def spin1_exponential(kappa: complex, alpha: complex, gamma: complex) -> np.ndarray:
    """
        exp(-kappa G) for the spin-1 operator G = alpha*S_z + gamma*S_x, using G^3 = (alpha^2 + gamma^2) G.
    """
    matrices = build_spin_matrices(1)
    generator = alpha * matrices.sz + gamma * matrices.sx
    squared = generator @ generator
    identity = np.eye(3, dtype=complex)
    radius_squared = complex(alpha) ** 2 + complex(gamma) ** 2

    if abs(radius_squared) < degenerate_eps:
        # G is nilpotent, the series stops at G^2
        return identity - kappa * generator + kappa ** 2 * squared / 2

    radius = np.sqrt(radius_squared)
    cosh_term = (np.cosh(kappa * radius) - 1) / radius_squared
    sinh_term = np.sinh(kappa * radius) / radius
    return identity + cosh_term * squared - sinh_term * generator


def _total_projections(N: int, spin: HalfInteger) -> np.ndarray:
    projections = float(spin) - np.arange(spin.dimension)
    totals = np.zeros(1)
    for _ in range(N):
        totals = (totals[:, None] + projections[None, :]).ravel()
    return totals


def brute_force_ising_g(N: int, S, J: float, J0: float, beta: float, t_grid: ArrayLike) -> CoherenceSeries:
    """
        Exact w=0 decoherence function by enumeration of all (2S+1)^N product configurations:
        g(t) = sum exp(i J0 M t / sqrt(N) + beta J M^2 / N) / sum exp(beta J M^2 / N), M = sum of m_i.
    """
    spin = HalfInteger.spin(S)
    states = spin.dimension ** N
    if states > ENUMERATION_LIMIT:
        raise EnumerationLimitError(states, ENUMERATION_LIMIT)

    totals = _total_projections(N, spin)
    exponents = beta * J * totals ** 2 / N
    weights = np.exp(exponents - exponents.max())
    normalization = weights.sum()

    times = np.asarray(t_grid, dtype=float)
    phases = J0 / math.sqrt(N) * totals
    ratio = np.array([np.dot(weights, np.exp(1j * phases * time)) / normalization for time in times])
    logger.debug("enumerated %d configurations for %d time points", states, len(times))
    return CoherenceSeries(times, ratio, diagnostics={"states": float(states)})


def brute_force_multiplicities(N: int, S, limit: int = MULTIPLICITY_LIMIT) -> Dict[HalfInteger, int]:
    """
        Multiplicities nu(j) read off the J^2 spectrum of the lowest non-negative J_z block.

        Every multiplet with j >= |m0| contributes exactly one state to the block J_z = m0, so the
        eigenvalue counts of J^2 = J+J- + J_z^2 - J_z restricted to that block are the multiplicities.
    """
    spin = HalfInteger.spin(S)
    states = spin.dimension ** N
    if states > limit:
        raise EnumerationLimitError(states, limit)

    s = float(spin)
    twice_projections = [spin.twice_value - 2 * k for k in range(spin.dimension)]
    twice_m0 = (N * spin.twice_value) % 2
    configurations = list(itertools.product(twice_projections, repeat=N))
    block = [c for c in configurations if sum(c) == twice_m0]
    lower = [c for c in configurations if sum(c) == twice_m0 - 2]
    lower_index = {c: i for i, c in enumerate(lower)}

    lowering = np.zeros((len(lower), len(block)))
    for column, configuration in enumerate(block):
        for site, twice_m in enumerate(configuration):
            if twice_m == -spin.twice_value:
                continue
            m = twice_m / 2
            target = configuration[:site] + (twice_m - 2,) + configuration[site + 1:]
            lowering[lower_index[target], column] += math.sqrt(s * (s + 1) - m * (m - 1))

    m0 = twice_m0 / 2
    casimirs = np.linalg.eigvalsh(lowering.T @ lowering) + m0 * m0 - m0
    twice_j = np.rint(np.sqrt(1 + 4 * np.clip(casimirs, 0, None)) - 1).astype(int)
    counts = Counter(int(value) for value in twice_j)
    return {HalfInteger(value): count for value, count in sorted(counts.items())}
