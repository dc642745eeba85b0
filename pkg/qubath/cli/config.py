from __future__ import annotations
import argparse
import logging
import shlex
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from qubath.bath.half_integer import HalfInteger
import qubath.dynamics.hp_boson as qdboson
import qubath.dynamics.ising_mf as qdimf
import qubath.dynamics.xy_model as qdxy
from qubath.exceptions import ConfigError, InvalidParameterError, InvalidSpinError, QubathError

logger = logging.getLogger(__name__)

PROGRAM = "qubath"
SWEEPABLE = ("xy-asymptote", "tau-d")
XY_SWEEP_KEYS = ("mu", "alpha", "g", "beta", "T", "S", "N", "theta")


class Subcommand(Enum):
    DEGENERACY = "degeneracy"
    DISTRIBUTION = "distribution"
    XY_EVOLVE = "xy-evolve"
    XY_ASYMPTOTE = "xy-asymptote"
    TAU_D = "tau-d"
    HP_BOSON = "hp-boson"
    ISING_MF = "ising-mf"
    ISING_EXACT = "ising-exact"
    COMPARE = "compare"
    SWEEP = "sweep"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


@dataclass(frozen=True)
class Grid:
    """Equally spaced time grid; the unit depends on the command (1/alpha or 1/J0)."""
    t_min: float
    t_max: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError("points", f"a grid needs at least 2 points, got {self.points}")
        if not self.t_max > self.t_min:
            raise ConfigError("t-max", f"the grid must be strictly increasing, got t-min={self.t_min}, t-max={self.t_max}")

    def values(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.points)


@dataclass(frozen=True)
class OutputSpec:
    path: Optional[Path]
    format: OutputFormat


@dataclass(frozen=True)
class SweepSpec:
    over: str
    values: Tuple[float, ...]
    command: Subcommand
    jobs: int = 1


@dataclass(frozen=True)
class RunConfig:
    """
        A validated command line invocation.

        Attributes
        ----------
        subcommand : Subcommand
        parameters : Dict[str, object]
            physical parameters after validation; S is kept as its string form ("1/2", "3/2")
        grid : Grid | None
            time grid of the evolution commands
        output : OutputSpec
            destination and format; no path means standard output
        sweep : SweepSpec | None
            scanned parameter of the sweep command
    """
    subcommand: Subcommand
    parameters: Dict[str, object]
    grid: Optional[Grid]
    output: OutputSpec
    sweep: Optional[SweepSpec] = None
    verbose: bool = False

    def echo(self) -> Dict[str, object]:
        echo = {"subcommand": self.subcommand.value, **self.parameters}
        if self.grid is not None:
            echo.update({"t_min": self.grid.t_min, "t_max": self.grid.t_max, "points": self.grid.points})
        if self.sweep is not None:
            echo.update({"over": self.sweep.over, "values": list(self.sweep.values),
                         "command": self.sweep.command.value})
        return echo


class ConfigParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError("", message)


def _spin(text: str) -> HalfInteger:
    try:
        return HalfInteger.spin(text)
    except InvalidSpinError as error:
        raise argparse.ArgumentTypeError(str(error))


def _add_temperature(parser: argparse.ArgumentParser, required: bool = True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--T", type=float, help="bath temperature, k_B = 1")
    group.add_argument("--beta", type=float, help="inverse bath temperature")


def _add_xy(parser: argparse.ArgumentParser, temperature_required: bool = True):
    parser.add_argument("--mu", type=float, default=1.0)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--g", type=float, default=1.0)
    parser.add_argument("--N", type=int, default=1000)
    parser.add_argument("--S", type=_spin, default=HalfInteger(1))
    parser.add_argument("--theta", type=float, default=0.0)
    _add_temperature(parser, temperature_required)


def _add_grid(parser: argparse.ArgumentParser, t_max: float, points: int = 201):
    parser.add_argument("--t-min", type=float, default=0.0)
    parser.add_argument("--t-max", type=float, default=t_max)
    parser.add_argument("--points", type=int, default=points)


def _add_ising(parser: argparse.ArgumentParser):
    parser.add_argument("--N", type=int, required=True)
    parser.add_argument("--S", type=_spin, required=True)
    parser.add_argument("--J", type=float, default=1.0)
    parser.add_argument("--J0", type=float, default=1.0)
    parser.add_argument("--T", type=float, default=1.0)
    parser.add_argument("--mu", type=float, default=0.0)


def build_parser() -> ConfigParser:
    parser = ConfigParser(prog=PROGRAM, description="Qubit decoherence in spin-S baths")
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress to standard error")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help)
        sub.add_argument("--config", help="flat key = value file, overridden by flags")
        sub.add_argument("--output", "-o", help="output path, standard output when omitted")
        sub.add_argument("--format", choices=[f.value for f in OutputFormat])
        return sub

    degeneracy = command("degeneracy", "multiplicities nu(j, N; S)")
    degeneracy.add_argument("--N", type=int, required=True)
    degeneracy.add_argument("--S", type=_spin, required=True)

    distribution = command("distribution", "law of the total bath spin j")
    distribution.add_argument("--N", type=int, required=True)
    distribution.add_argument("--S", type=_spin, required=True)
    distribution.add_argument("--kind", choices=["exact", "gaussian"], default="exact")
    distribution.add_argument("--points", type=int, default=201)

    evolve = command("xy-evolve", "coherence and populations in the XY bath, t in units of 1/alpha")
    _add_xy(evolve)
    evolve.add_argument("--rho11", type=float, default=1.0)
    evolve.add_argument("--rho12", type=float, default=0.0)
    _add_grid(evolve, 10.0)

    asymptote = command("xy-asymptote", "long-time coherence psi and populations")
    _add_xy(asymptote)
    asymptote.add_argument("--rho11", type=float, default=1.0)

    tau = command("tau-d", "short-time decoherence time")
    _add_xy(tau)

    boson = command("hp-boson", "large-S bosonic limit, t in units of 1/alpha")
    boson.add_argument("--S", type=_spin, required=True)
    boson.add_argument("--g", type=float, default=1.0)
    boson.add_argument("--alpha", type=float, default=0.5)
    boson.add_argument("--mu", type=float, default=3.0)
    boson.add_argument("--n-max", type=int)
    _add_temperature(boson)
    _add_grid(boson, 50.0, 1001)

    meanfield = command("ising-mf", "mean-field Ising bath, t in units of 1/J0")
    _add_ising(meanfield)
    meanfield.add_argument("--w", type=float, default=0.0)
    meanfield.add_argument("--method", choices=[m.value for m in qdimf.GMethod], default="auto")
    _add_grid(meanfield, 10.0)

    exact = command("ising-exact", "exact Ising bath at w = 0, t in units of 1/J0")
    _add_ising(exact)
    exact.add_argument("--J-equals-T", action="store_true", help="set J to the temperature")
    exact.add_argument("--beta-from-T", action="store_true", help="take beta = 1/T, which is always the case for Ising commands")
    _add_grid(exact, 30.0, 601)

    compare = command("compare", "exact against mean-field |g| at w = 0")
    _add_ising(compare)
    _add_grid(compare, 10.0, 401)

    sweep = command("sweep", "one row per value of a scanned parameter")
    sweep.add_argument("--over", required=True, choices=XY_SWEEP_KEYS)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--command", dest="target", required=True, choices=SWEEPABLE)
    sweep.add_argument("--jobs", type=int, default=1)
    _add_xy(sweep, temperature_required=False)
    sweep.add_argument("--rho11", type=float, default=1.0)
    return parser


def read_config_file(path) -> List[str]:
    """
        Turns a flat key = value file into command line tokens. Blank lines and # comments are
        skipped; true/false values toggle switches.
    """
    tokens = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as error:
        raise ConfigError("config", f"cannot read {path}: {error.strerror}")

    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {number} is not of the form key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() == "true":
            tokens.append(flag)
        elif value.lower() != "false":
            tokens.extend([flag, *shlex.split(value)])
    return tokens


def _expand_config(argv: List[str]) -> List[str]:
    for index, token in enumerate(argv):
        if token == "--config" and index + 1 < len(argv):
            rest = argv[:index] + argv[index + 2:]
            path = argv[index + 1]
        elif token.startswith("--config="):
            rest = argv[:index] + argv[index + 1:]
            path = token.split("=", 1)[1]
        else:
            continue
        split = next((i for i, t in enumerate(rest) if t in {c.value for c in Subcommand}), None)
        if split is None:
            raise ConfigError("config", "the subcommand must be given on the command line")
        split += 1
        return rest[:split] + read_config_file(path) + rest[split:]
    return argv


def _temperature(args) -> float:
    if getattr(args, "beta", None) is not None:
        return args.beta
    if args.T is None:
        raise ConfigError("T", "either T or beta is required")
    if args.T <= 0:
        raise ConfigError("T", f"temperature must be positive, got {args.T}")
    return 1 / args.T


def _validate(key: str, build):
    # module constructors carry the invariants; re-raise their messages under the config key
    try:
        return build()
    except InvalidParameterError as error:
        raise ConfigError(error.name, str(error))
    except InvalidSpinError as error:
        raise ConfigError("S", str(error))
    except QubathError as error:
        raise ConfigError(key, str(error))


def _xy_parameters(args) -> Dict[str, object]:
    beta = _temperature(args)
    params = _validate("xy", lambda: qdxy.XYParams(args.mu, args.alpha, args.g, beta, args.N, args.S, args.theta))
    return {"mu": params.mu, "alpha": params.alpha, "g": params.g, "beta": params.beta, "N": params.N,
            "S": str(params.S), "theta": params.theta}


def _ising_parameters(args, w: float) -> Dict[str, object]:
    J = args.T if getattr(args, "J_equals_T", False) else args.J
    if args.J0 == 0:
        raise ConfigError("J0", "must be nonzero, Ising times are given in units of 1/J0")
    params = _validate("ising", lambda: qdimf.IsingParams(args.N, args.S, J, args.J0, w, args.T, args.mu))
    return {"N": params.N, "S": str(params.S), "J": params.J, "J0": params.J0, "w": params.w,
            "T": params.T, "mu": params.mu}


def _require_positive(key: str, value: int):
    if value < 1:
        raise ConfigError(key, f"must be at least 1, got {value}")


def _parameters(subcommand: Subcommand, args) -> Dict[str, object]:
    if subcommand in (Subcommand.DEGENERACY, Subcommand.DISTRIBUTION):
        _require_positive("N", args.N)
        parameters = {"N": args.N, "S": str(args.S)}
        if subcommand == Subcommand.DISTRIBUTION:
            _require_positive("points", args.points)
            parameters.update({"kind": args.kind, "points": args.points})
        return parameters
    if subcommand in (Subcommand.XY_EVOLVE, Subcommand.XY_ASYMPTOTE, Subcommand.TAU_D, Subcommand.SWEEP):
        parameters = _xy_parameters(args)
        if hasattr(args, "rho11"):
            rho12 = getattr(args, "rho12", 0.0)
            _validate("rho11", lambda: qdxy._validate_density_matrix(density_matrix(args.rho11, rho12)))
            parameters.update({"rho11": args.rho11, "rho12": rho12})
        return parameters
    if subcommand == Subcommand.HP_BOSON:
        beta = _temperature(args)
        params = _validate("hp", lambda: qdboson.BosonParams(args.S, args.g, args.alpha, args.mu, beta, args.n_max))
        return {"S": str(params.S), "g": params.g, "alpha": params.alpha, "mu": params.mu, "beta": params.beta,
                "n_max": params.n_max}
    if subcommand == Subcommand.ISING_MF:
        return {**_ising_parameters(args, args.w), "method": args.method}
    return _ising_parameters(args, 0.0)


def density_matrix(rho11: float, rho12: complex) -> np.ndarray:
    return np.array([[rho11, rho12], [np.conj(rho12), 1 - rho11]], dtype=complex)


def _sweep_point(args, value: float) -> argparse.Namespace:
    point = argparse.Namespace(**vars(args))
    if args.over == "S":
        point.S = HalfInteger.spin(value)
    elif args.over == "N":
        point.N = int(value)
    else:
        setattr(point, args.over, value)
    if args.over == "T":
        point.beta = None
    elif args.over == "beta":
        point.T = None
    return point


def _sweep(args) -> Tuple[SweepSpec, Dict[str, object]]:
    try:
        values = tuple(float(value) for value in args.values.split(","))
    except ValueError:
        raise ConfigError("values", f"expected comma-separated numbers, got {args.values!r}")
    _require_positive("jobs", args.jobs)
    try:
        checked = [_parameters(Subcommand.SWEEP, _sweep_point(args, value)) for value in values]
    except InvalidSpinError as error:
        raise ConfigError("values", str(error))

    # the scanned key (beta for a temperature scan) is set per point
    base = dict(checked[0])
    base.pop("beta" if args.over in ("T", "beta") else args.over)
    return SweepSpec(args.over, values, Subcommand(args.target), args.jobs), base


def _output(args) -> OutputSpec:
    path = Path(args.output) if args.output else None
    if args.format is not None:
        output_format = OutputFormat(args.format)
    elif path is not None and path.suffix.lstrip(".") in {f.value for f in OutputFormat}:
        output_format = OutputFormat(path.suffix.lstrip("."))
    else:
        output_format = OutputFormat.CSV
    if output_format == OutputFormat.SVG and path is None:
        raise ConfigError("output", "an svg plot needs an output path")
    return OutputSpec(path, output_format)


def parse_and_validate(argv: Sequence[str]) -> RunConfig:
    """
        Parses the command line, expanding a --config file in place so that later flags win, and
        checks every parameter against the module invariants before anything runs.
    """
    argv = _expand_config(list(argv))
    args = build_parser().parse_args(argv)
    subcommand = Subcommand(args.command)

    sweep = None
    if subcommand == Subcommand.SWEEP:
        sweep, parameters = _sweep(args)
    else:
        parameters = _parameters(subcommand, args)

    grid = None
    if hasattr(args, "t_max"):
        grid = Grid(args.t_min, args.t_max, args.points)

    logger.debug("validated %s with %s", subcommand.value, parameters)
    return RunConfig(subcommand, parameters, grid, _output(args), sweep, args.verbose)
