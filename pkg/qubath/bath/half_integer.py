from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from qubath.exceptions import InvalidQuantumNumberError, InvalidSpinError


@dataclass(frozen=True, order=True)
class HalfInteger:
    """
        An exact half-integer quantum number (S, j, m or l), stored as twice its value.

        Attributes
        ----------
        twice_value : int
            2S, 2j, 2m or 2l

        Methods
        -------
        value() -> Fraction:
            the exact quantum number
        casimir() -> float:
            S(S+1) for the stored value
        dimension() -> int:
            2S+1, the size of the spin-S multiplet
        is_integer() -> bool:
            whether the quantum number is an integer (2S even)

        Static Methods
        --------------
        of(value: int | float | str | Fraction | HalfInteger) -> HalfInteger:
            parses any number whose double is an integer
        spin(value) -> HalfInteger:
            parses a spin magnitude, which must satisfy 2S >= 1
    """
    twice_value: int

    @staticmethod
    def of(value: Union[int, float, str, Fraction, HalfInteger]) -> HalfInteger:
        if isinstance(value, HalfInteger):
            return value
        try:
            twice = 2 * Fraction(value)
        except (ValueError, TypeError, ZeroDivisionError):
            raise InvalidQuantumNumberError(value, "not a number")
        if twice.denominator != 1:
            raise InvalidQuantumNumberError(value, "twice the value must be an integer")
        return HalfInteger(int(twice))

    @staticmethod
    def spin(value) -> HalfInteger:
        try:
            spin = HalfInteger.of(value)
        except InvalidQuantumNumberError:
            raise InvalidSpinError(value)
        if spin.twice_value < 1:
            raise InvalidSpinError(value)
        return spin

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def casimir(self) -> float:
        return self.twice_value * (self.twice_value + 2) / 4

    @property
    def dimension(self) -> int:
        return self.twice_value + 1

    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def same_parity(self, other: HalfInteger) -> bool:
        return (self.twice_value - other.twice_value) % 2 == 0

    def __add__(self, other) -> HalfInteger:
        return HalfInteger(self.twice_value + HalfInteger.of(other).twice_value)

    def __radd__(self, other) -> HalfInteger:
        return self.__add__(other)

    def __sub__(self, other) -> HalfInteger:
        return HalfInteger(self.twice_value - HalfInteger.of(other).twice_value)

    def __mul__(self, count: int) -> HalfInteger:
        return HalfInteger(self.twice_value * count)

    def __rmul__(self, count: int) -> HalfInteger:
        return self.__mul__(count)

    def __neg__(self) -> HalfInteger:
        return HalfInteger(-self.twice_value)

    def __abs__(self) -> HalfInteger:
        return HalfInteger(abs(self.twice_value))

    def __float__(self) -> float:
        return self.twice_value / 2

    def __str__(self) -> str:
        if self.is_integer():
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def check_projection(j: HalfInteger, m: HalfInteger):
    """Raises unless m is an admissible projection of j: |2m| <= 2j with matching parity."""
    if j.twice_value < 0:
        raise InvalidQuantumNumberError(j, "magnitude must be non-negative")
    if abs(m.twice_value) > j.twice_value:
        raise InvalidQuantumNumberError(m, f"|m| exceeds {j}")
    if not j.same_parity(m):
        raise InvalidQuantumNumberError(m, f"parity differs from {j}")
