from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate, special

from qubath.bath.half_integer import HalfInteger
import qubath.bath.degeneracy as qbdeg
from qubath.exceptions import DivergentExpectationError, InvalidParameterError, QuadratureError

logger = logging.getLogger(__name__)

CUTOFF_SIGMAS = 12
MAX_CUTOFF_STEPS = 80
CUTOFF_GROWTH = 1.5
TAIL_TOLERANCE = 1e-11
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-9
QUAD_ACCEPT = 1e-8
QUAD_LIMIT = 200


class DistributionKind(Enum):
    EXACT = "exact"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class JDistribution:
    """
        A probability law P(j) of the bath's total angular momentum.

        Attributes
        ----------
        kind : DistributionKind
            exact (discrete, from a degeneracy table) or gaussian (continuous, large N)
        N : int
            number of bath spins
        S : HalfInteger
            spin magnitude
        table : DegeneracyTable | None
            multiplicities backing the exact kind

        Static Methods
        --------------
        exact(table: DegeneracyTable) -> JDistribution
        gaussian(N: int, S) -> JDistribution
    """
    kind: DistributionKind
    N: int
    S: HalfInteger
    table: Optional[qbdeg.DegeneracyTable] = None

    @staticmethod
    def exact(table: qbdeg.DegeneracyTable) -> JDistribution:
        return JDistribution(DistributionKind.EXACT, table.N, table.S, table)

    @staticmethod
    def gaussian(N: int, S) -> JDistribution:
        if N < 1:
            raise InvalidParameterError("N", N, "at least one spin is required")
        return JDistribution(DistributionKind.GAUSSIAN, N, HalfInteger.spin(S))

    @property
    def normalization(self) -> float:
        return expectation(self, lambda j: 1.0)


@dataclass(frozen=True)
class Expectation:
    value: float
    error: float
    cutoff: float
    tail: float


def exact_pmf_fraction(table: qbdeg.DegeneracyTable, j) -> Fraction:
    j = HalfInteger.of(j)
    return Fraction((j.twice_value + 1) * table.nu(j), table.S.dimension ** table.N)


def exact_pmf(table: qbdeg.DegeneracyTable, j) -> float:
    return float(exact_pmf_fraction(table, j))


def _gaussian_scale(N: int, S) -> float:
    # exponent coefficient 3 / (2 N S(S+1))
    return 3 / (2 * N * HalfInteger.spin(S).casimir)


def gaussian_pdf(N: int, S, j: ArrayLike):
    """P(j) = 6j^2/(NS(S+1)) sqrt(3/(2 pi N S(S+1))) exp(-3j^2/(2 S(S+1) N))."""
    a = _gaussian_scale(N, S)
    j = np.asarray(j, dtype=float)
    density = 4 / math.sqrt(math.pi) * a ** 1.5 * j ** 2 * np.exp(-a * j ** 2)
    return float(density) if density.ndim == 0 else density


def gaussian_cdf(N: int, S, j: ArrayLike):
    a = _gaussian_scale(N, S)
    x = math.sqrt(a) * np.asarray(j, dtype=float)
    cumulative = special.erf(x) - 2 / math.sqrt(math.pi) * x * np.exp(-x ** 2)
    return float(cumulative) if np.ndim(cumulative) == 0 else cumulative


def moments(N: int, S) -> Tuple[float, float]:
    spin = HalfInteger.spin(S)
    scale = N * spin.casimir
    mean = 2 * math.sqrt(2 / (3 * math.pi)) * math.sqrt(scale)
    variance = (1 - 8 / (3 * math.pi)) * scale
    return mean, variance


def _weighted_density(dist: JDistribution, f: Callable[[float], float]) -> Callable[[float], float]:
    def integrand(j):
        density = gaussian_pdf(dist.N, dist.S, j)
        if density == 0.0:
            return 0.0
        try:
            return density * f(j)
        except OverflowError:
            return math.inf
    return integrand


def _integrate_gaussian(dist: JDistribution, f: Callable[[float], float]) -> Expectation:
    """
        Quadrature of P(j) f(j) on [0, j_max]. The cutoff starts at mean + 12 sigma and moves out
        along the decay of the weighted integrand, estimated from its ratio over one sigma, until
        the tail beyond it is negligible. A weight that overflows while the density is still
        finite either diverges (the integrand never decayed) or sits past the decay, in which case
        the cutoff is pulled back halfway to the last decaying point.
    """
    mean, variance = moments(dist.N, dist.S)
    sigma = math.sqrt(variance)
    integrand = _weighted_density(dist, f)

    cutoff = mean + CUTOFF_SIGMAS * sigma
    decaying = None
    for _ in range(MAX_CUTOFF_STEPS):
        with np.errstate(over="ignore", invalid="ignore"):
            here = abs(integrand(cutoff))
            beyond = abs(integrand(cutoff + sigma))
        if not (math.isfinite(here) and math.isfinite(beyond)):
            if decaying is None:
                raise DivergentExpectationError(cutoff, here)
            cutoff = (decaying + cutoff) / 2
            continue
        if here == 0.0 and decaying is not None:
            cutoff = (decaying + cutoff) / 2
            continue
        if here > 0.0 and beyond >= here:
            cutoff *= CUTOFF_GROWTH
            continue

        value, error, *_ = integrate.quad(integrand, 0, cutoff, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
                                          limit=QUAD_LIMIT, full_output=1)
        if not math.isfinite(value):
            raise DivergentExpectationError(cutoff, here)
        # e-folding length of the integrand past the cutoff
        decay = sigma / math.log(here / beyond) if 0.0 < beyond < here else 0.0
        tail = here * decay
        target = TAIL_TOLERANCE * max(abs(value), np.finfo(float).tiny)
        if tail <= target:
            break
        logger.debug("tail %.3e at cutoff %.6g, extending", tail, cutoff)
        decaying = cutoff
        cutoff += max(sigma, decay * math.log(tail / target))
    else:
        raise DivergentExpectationError(cutoff, here)

    if error > QUAD_ACCEPT * max(abs(value), QUAD_EPSABS / QUAD_ACCEPT):
        raise QuadratureError(value, error)
    return Expectation(value, error, cutoff, tail)


def integrate_expectation(dist: JDistribution, f: Callable[[float], float]) -> Expectation:
    if dist.kind == DistributionKind.EXACT:
        terms = [float(exact_pmf_fraction(dist.table, j)) * f(float(j)) for j in dist.table.js()]
        return Expectation(math.fsum(terms), 0.0, float(dist.N * dist.S), 0.0)
    return _integrate_gaussian(dist, f)


def expectation(dist: JDistribution, f: Callable[[float], float]) -> float:
    """<f(j)>: a weighted sum for the exact law, truncated adaptive quadrature for the gaussian one."""
    return integrate_expectation(dist, f).value


def kolmogorov_distance(table: qbdeg.DegeneracyTable) -> float:
    """
        Largest gap between the exact cumulative law and the gaussian one. The exact mass at j is
        compared on the cell [j, j+1], the gaussian density being centred on the cell midpoint.
    """
    cumulative = Fraction(0)
    distance = 0.0
    for j in table.admissible_js():
        cumulative += exact_pmf_fraction(table, j)
        gap = abs(float(cumulative) - gaussian_cdf(table.N, table.S, float(j) + 1))
        distance = max(distance, gap)
    return distance
