from __future__ import annotations
import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import legendre

MIN_PANELS = 16


@lru_cache(maxsize=None)
def _reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(upper: float, panel_width: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
        Composite Gauss-Legendre rule on [0, upper] with equal panels no wider than panel_width.
    """
    panels = max(MIN_PANELS, math.ceil(upper / panel_width))
    edges = np.linspace(0.0, upper, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    middle = (edges[1:] + edges[:-1]) / 2
    nodes, weights = _reference_rule(order)
    return ((middle[:, None] + half[:, None] * nodes[None, :]).ravel(),
            (half[:, None] * weights[None, :]).ravel())
