from __future__ import annotations
import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import numpy as np

from qubath import __version__

FLOAT_FORMAT = ".17g"


@dataclass(frozen=True)
class Column:
    name: str
    unit: str

    def header(self) -> str:
        return f"{self.name}({self.unit})"


@dataclass
class ResultEnvelope:
    """
        Everything a command produces: the echoed configuration, the producing version, typed
        columns with units, data rows and diagnostics.

        Attributes
        ----------
        config : Dict[str, object]
            validated parameters the result was produced from
        columns : List[Column]
            one per row entry, each with a unit ("1" for dimensionless values)
        rows : List[List[float | int]]
        diagnostics : Dict[str, object]
            quadrature errors, root finder iterations, validity flags, or the error that stopped the run
        version : str
            version of the package that produced the result

        Methods
        -------
        to_json() -> str
        to_csv() -> str
        column(name: str) -> numpy.Array

        Static Methods
        --------------
        from_json(text: str) -> ResultEnvelope
    """
    config: Dict[str, object]
    columns: List[Column]
    rows: List[List[float]] = field(default_factory=list)
    diagnostics: Dict[str, object] = field(default_factory=dict)
    version: str = __version__

    def column(self, name: str) -> np.ndarray:
        names = [c.name for c in self.columns]
        index = names.index(name)
        return np.array([row[index] for row in self.rows], dtype=float)

    def to_json(self) -> str:
        document = {
            "version": self.version,
            "config": self.config,
            "columns": [{"name": c.name, "unit": c.unit} for c in self.columns],
            "rows": self.rows,
            "diagnostics": self.diagnostics,
        }
        return json.dumps(document, indent=2, sort_keys=True, default=_plain) + "\n"

    @staticmethod
    def from_json(text: str) -> ResultEnvelope:
        document = json.loads(text)
        return ResultEnvelope(document["config"],
                              [Column(c["name"], c["unit"]) for c in document["columns"]],
                              document["rows"], document["diagnostics"], document["version"])

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([c.header() for c in self.columns])
        for row in self.rows:
            writer.writerow([_cell(value) for value in row])
        return buffer.getvalue()

    @staticmethod
    def failure(config: Dict[str, object], error: Exception) -> ResultEnvelope:
        return ResultEnvelope(config, [], [], {"error": type(error).__name__, "message": str(error)})


def _plain(value):
    # numpy scalars and arrays that slip into configs or diagnostics
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not serializable")


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), FLOAT_FORMAT)


def complex_columns(name: str, unit: str = "1") -> List[Column]:
    return [Column(f"re_{name}", unit), Column(f"im_{name}", unit), Column(f"abs_{name}", unit)]


def complex_values(values: Iterable[complex]) -> List[List[float]]:
    return [[float(z.real), float(z.imag), float(abs(z))] for z in values]


def tabulate(*columns: Sequence) -> List[List[float]]:
    """Zips equally long columns into rows of plain python numbers."""
    rows = []
    for entries in zip(*columns):
        row = []
        for entry in entries:
            if isinstance(entry, (list, tuple)):
                row.extend(_number(value) for value in entry)
            else:
                row.append(_number(entry))
        rows.append(row)
    return rows


def _number(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    return float(value)


def write(envelope: ResultEnvelope, path, output_format: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = envelope.to_json() if output_format == "json" else envelope.to_csv()
    with open(path, "w", newline="") as handle:
        handle.write(text)
    return path
