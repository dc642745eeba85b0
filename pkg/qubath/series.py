from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np
from numpy.typing import ArrayLike


def _frozen(values: ArrayLike, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CoherenceSeries:
    """
        A class to represent the time evolution of the qubit's reduced density matrix.

        Attributes
        ----------
        times : numpy.Array
            ascending time grid (units of 1/alpha for XY and bosonic runs, real time for Ising runs)
        ratio12 : numpy.Array
            complex coherence ratio rho12(t)/rho12(0) for every time
        pop11 : numpy.Array | None
            upper-level population rho11(t), when the model provides it
        diagnostics : Dict[str, float | str]
            quadrature errors, truncation sizes and similar figures of merit

        Methods
        -------
        magnitude() -> numpy.Array:
            |rho12(t)/rho12(0)|
        pop22() -> numpy.Array | None:
            lower-level population, 1 - pop11
    """
    times: np.ndarray
    ratio12: np.ndarray
    pop11: Optional[np.ndarray] = None
    diagnostics: Dict[str, Union[float, str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "times", _frozen(self.times, float))
        object.__setattr__(self, "ratio12", _frozen(self.ratio12, complex))
        if self.pop11 is not None:
            object.__setattr__(self, "pop11", _frozen(self.pop11, float))

    def magnitude(self) -> np.ndarray:
        return np.abs(self.ratio12)

    def pop22(self) -> Optional[np.ndarray]:
        return None if self.pop11 is None else 1.0 - self.pop11

    def __len__(self) -> int:
        return len(self.times)
