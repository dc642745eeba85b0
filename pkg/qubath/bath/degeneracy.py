from __future__ import annotations
import csv
import itertools
import logging
import math
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import List, Mapping, Optional, Tuple

from qubath.bath.half_integer import HalfInteger, check_projection
from qubath.exceptions import InvalidParameterError, InvalidQuantumNumberError, MismatchedSpinError

logger = logging.getLogger(__name__)

CACHE_ENV = "QUBATH_CACHE_DIR"
CSV_HEADER = ("two_j", "nu")
MULTINOMIAL_MAX_N = 6


@dataclass(frozen=True)
class LevelCount:
    """dim F_m: the number of product states of N spins with total projection m."""
    m: HalfInteger
    count: int


@dataclass(frozen=True)
class DegeneracyTable:
    """
        Exact multiplicities nu(j, N; S) of total angular momentum j in N spin-S particles.

        Attributes
        ----------
        N : int
            number of spins
        S : HalfInteger
            spin magnitude
        entries : Mapping[HalfInteger, int]
            j -> nu(j) for the j with nu(j) > 0, ascending in j, up to NS

        Methods
        -------
        nu(j) -> int:
            multiplicity of j, 0 for a j of the right parity below NS that no multiplet reaches,
            raises for inadmissible j
        js() -> List[HalfInteger]:
            the j values carrying multiplets, ascending
        admissible_js() -> List[HalfInteger]:
            every j of the parity of NS from 0 or 1/2 up to NS, ascending
        total_states() -> int:
            sum over j of (2j+1) nu(j), equal to (2S+1)^N
    """
    N: int
    S: HalfInteger
    entries: Mapping[HalfInteger, int]

    def nu(self, j) -> int:
        j = HalfInteger.of(j)
        twice_total = self.N * self.S.twice_value
        if not 0 <= j.twice_value <= twice_total or (twice_total - j.twice_value) % 2:
            raise InvalidQuantumNumberError(j, f"not an admissible total spin for N={self.N}, S={self.S}")
        return self.entries.get(j, 0)

    def js(self) -> List[HalfInteger]:
        return list(self.entries.keys())

    def admissible_js(self) -> List[HalfInteger]:
        twice_total = self.N * self.S.twice_value
        return [HalfInteger(twice_j) for twice_j in range(twice_total % 2, twice_total + 1, 2)]

    def total_states(self) -> int:
        return sum((j.twice_value + 1) * nu for j, nu in self.entries.items())

    def __str__(self) -> str:
        rows = ", ".join(f"{j}:{nu}" for j, nu in self.entries.items())
        return f"nu(j, N={self.N}; S={self.S}) = {{{rows}}}"


@lru_cache(maxsize=256)
def _power_coefficients(N: int, degree: int) -> Tuple[int, ...]:
    # Q = P^N with P = 1 + x + ... + x^d satisfies P Q' = N P' Q, hence
    # k c_k = sum_{r=1..d} (r (N+1) - k) c_{k-r}, the division being exact
    coefficients = [1]
    for k in range(1, N * degree + 1):
        total = 0
        for r in range(1, min(degree, k) + 1):
            total += (r * (N + 1) - k) * coefficients[k - r]
        coefficients.append(total // k)
    return tuple(coefficients)


def level_count_vector(N: int, S) -> Tuple[int, ...]:
    """
        Coefficients of (1 + x + ... + x^(2S))^N; entry k is dim F_m for m = k - NS.
    """
    spin = HalfInteger.spin(S)
    if N < 1:
        raise InvalidParameterError("N", N, "at least one spin is required")
    return _power_coefficients(N, spin.twice_value)


def dim_fm(N: int, S, m) -> int:
    spin = HalfInteger.spin(S)
    m = HalfInteger.of(m)
    check_projection(spin * N, m)
    counts = level_count_vector(N, spin)
    return counts[(m.twice_value + N * spin.twice_value) // 2]


def level_counts(N: int, S) -> List[LevelCount]:
    spin = HalfInteger.spin(S)
    counts = level_count_vector(N, spin)
    lowest = -N * spin.twice_value
    return [LevelCount(HalfInteger(lowest + 2 * k), count) for k, count in enumerate(counts)]


def dim_fm_multinomial(N: int, S, m) -> int:
    """
        dim F_m as the constrained multinomial sum over occupation numbers of the 2S+1 levels.
        Exponential in N; kept as a cross-check for small systems.
    """
    spin = HalfInteger.spin(S)
    m = HalfInteger.of(m)
    if N > MULTINOMIAL_MAX_N:
        raise InvalidParameterError("N", N, f"the multinomial form is limited to N <= {MULTINOMIAL_MAX_N}")
    check_projection(spin * N, m)

    twice_levels = [spin.twice_value - 2 * k for k in range(spin.dimension)]
    total = 0
    for occupied in itertools.combinations_with_replacement(range(spin.dimension), N):
        if sum(twice_levels[k] for k in occupied) != m.twice_value:
            continue
        denominator = 1
        for k in range(spin.dimension):
            denominator *= math.factorial(occupied.count(k))
        total += math.factorial(N) // denominator
    return total


def degeneracy_table(N: int, S) -> DegeneracyTable:
    spin = HalfInteger.spin(S)
    counts = level_count_vector(N, spin)
    twice_total = N * spin.twice_value

    def count_at(twice_m: int) -> int:
        if twice_m > twice_total:
            return 0
        return counts[(twice_m + twice_total) // 2]

    entries = {}
    for twice_j in range(twice_total % 2, twice_total + 1, 2):
        nu = count_at(twice_j) - count_at(twice_j + 2)
        if nu > 0:
            entries[HalfInteger(twice_j)] = nu
    return DegeneracyTable(N, spin, MappingProxyType(entries))


def spin_half_degeneracy(N: int, j) -> int:
    """nu(j, N; 1/2) = C(N, N/2 - j) - C(N, N/2 - j - 1)."""
    j = HalfInteger.of(j)
    lower = (N - j.twice_value) // 2
    if (N - j.twice_value) % 2 != 0 or lower < 0:
        raise InvalidQuantumNumberError(j, f"not an admissible total spin for N={N} spins 1/2")
    return math.comb(N, lower) - (math.comb(N, lower - 1) if lower >= 1 else 0)


def _require_same_spin(first: DegeneracyTable, second: DegeneracyTable):
    if first.S != second.S:
        raise MismatchedSpinError(first.S, second.S)


def degeneracy_recursion_check(table_N: DegeneracyTable, table_N1: DegeneracyTable) -> bool:
    """
        Adding one spin: nu(j, N+1; S) = sum of nu(j', N; S) over |j - S| <= j' <= j + S.
    """
    _require_same_spin(table_N, table_N1)
    if table_N1.N != table_N.N + 1:
        raise InvalidParameterError("N", table_N1.N, f"the second table must describe N={table_N.N + 1} spins")

    spin = table_N.S
    for j in table_N1.admissible_js():
        nu = table_N1.nu(j)
        low = abs(j - spin)
        high = j + spin
        windowed = sum(count for j_prime, count in table_N.entries.items() if low <= j_prime <= high)
        if windowed != nu:
            logger.debug("recursion fails at j=%s: %d != %d", j, windowed, nu)
            return False
    return True


def _triangle(j1: HalfInteger, j2: HalfInteger, J: HalfInteger) -> bool:
    return abs(j1 - j2) <= J <= j1 + j2 and (j1 + j2).same_parity(J)


def degeneracy_composition(table_1: DegeneracyTable, table_2: DegeneracyTable, J) -> int:
    """sum over j1, j2 of nu(j1, N1) nu(j2, N2), restricted to the triangle |j1 - j2| <= J <= j1 + j2."""
    _require_same_spin(table_1, table_2)
    J = HalfInteger.of(J)
    return sum(nu_1 * nu_2
               for j1, nu_1 in table_1.entries.items()
               for j2, nu_2 in table_2.entries.items()
               if _triangle(j1, j2, J))


def composition_check(table_1: DegeneracyTable, table_2: DegeneracyTable, J) -> bool:
    J = HalfInteger.of(J)
    combined = degeneracy_table(table_1.N + table_2.N, table_1.S)
    return combined.entries.get(J, 0) == degeneracy_composition(table_1, table_2, J)


def table_cache_path(N: int, S, cache_dir) -> Path:
    spin = HalfInteger.spin(S)
    return Path(cache_dir) / f"nu_N{N}_2S{spin.twice_value}.csv"


def write_table_csv(table: DegeneracyTable, path) -> Path:
    """Writes the table to a sibling temporary file, then renames it over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    descriptor, temporary = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(descriptor, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for j, nu in table.entries.items():
                writer.writerow((j.twice_value, nu))
        os.replace(temporary, path)
    except BaseException:
        Path(temporary).unlink(missing_ok=True)
        raise
    return path


def read_table_csv(path, N: int, S) -> DegeneracyTable:
    spin = HalfInteger.spin(S)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise InvalidParameterError("header", ",".join(header), f"expected {','.join(CSV_HEADER)}")
        # files written before empty multiplets were dropped may still list nu = 0
        entries = {HalfInteger(int(two_j)): int(nu) for two_j, nu in reader if int(nu) > 0}
    return DegeneracyTable(N, spin, MappingProxyType(dict(sorted(entries.items()))))


def cached_degeneracy_table(N: int, S, cache_dir: Optional[str] = None) -> DegeneracyTable:
    cache_dir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    if not cache_dir:
        return degeneracy_table(N, S)

    path = table_cache_path(N, S, cache_dir)
    if path.exists():
        logger.debug("reading degeneracy table from %s", path)
        return read_table_csv(path, N, S)

    table = degeneracy_table(N, S)
    write_table_csv(table, path)
    logger.info("cached degeneracy table N=%d S=%s in %s", N, table.S, path)
    return table
