from __future__ import annotations
import logging
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qubath.cli.envelope import ResultEnvelope
from qubath.exceptions import PlotError

logger = logging.getLogger(__name__)

HASH_SALT = "qubath"


def _default_y(envelope: ResultEnvelope) -> Sequence[str]:
    names = [c.name for c in envelope.columns[1:]]
    # complex series are drawn through their modulus
    magnitudes = [name for name in names if name.startswith("abs_")]
    return magnitudes or [name for name in names if not name.startswith(("re_", "im_"))]


def emit_plot(envelope: ResultEnvelope, path, x: Optional[str] = None, y: Optional[Sequence[str]] = None) -> Path:
    """
        Draws the y columns against the x column (the first one by default) into a vector file.
        Identical envelopes produce identical bytes.
    """
    if not envelope.rows or len(envelope.columns) < 2:
        raise PlotError("the envelope has no rows or no y column")
    x = x or envelope.columns[0].name
    y = list(y) if y else list(_default_y(envelope))
    units = {c.name: c.unit for c in envelope.columns}
    for name in [x, *y]:
        if name not in units:
            raise PlotError(f"unknown column {name}")

    xs = envelope.column(x)
    series = [(name, envelope.column(name)) for name in y]
    series = [(name, values) for name, values in series if np.any(np.isfinite(values))]
    if not series:
        raise PlotError("no numeric y values")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": HASH_SALT, "svg.fonttype": "path"}):
        figure, axes = plt.subplots(figsize=(6, 4))
        for name, values in series:
            axes.plot(xs, values, label=name)
        axes.set_xlabel(f"{x} [{units[x]}]")
        axes.set_ylabel(", ".join(f"{name} [{units[name]}]" for name, _ in series))
        if len(series) > 1:
            axes.legend()
        figure.tight_layout()
        figure.savefig(path, format="svg", metadata={"Date": None})
        plt.close(figure)
    logger.info("plot written to %s", path)
    return path
