from __future__ import annotations
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Tuple

import numpy as np

from qubath.bath.half_integer import HalfInteger
import qubath.bath.degeneracy as qbdeg
import qubath.bath.distribution as qbdist
import qubath.dynamics.hp_boson as qdboson
import qubath.dynamics.ising_exact as qdexact
import qubath.dynamics.ising_mf as qdimf
import qubath.dynamics.xy_model as qdxy
from qubath.cli.config import RunConfig, Subcommand, density_matrix
from qubath.cli.envelope import Column, ResultEnvelope, complex_columns, complex_values, tabulate
from qubath.exceptions import InsufficientGridError

logger = logging.getLogger(__name__)


def _xy_params(parameters: Dict[str, object]) -> qdxy.XYParams:
    return qdxy.XYParams(parameters["mu"], parameters["alpha"], parameters["g"], parameters["beta"],
                         parameters["N"], parameters["S"], parameters["theta"])


def _ising_params(parameters: Dict[str, object]) -> qdimf.IsingParams:
    return qdimf.IsingParams(parameters["N"], parameters["S"], parameters["J"], parameters["J0"],
                             parameters["w"], parameters["T"], parameters["mu"])


def cmd_degeneracy(config: RunConfig) -> ResultEnvelope:
    p = config.parameters
    table = qbdeg.cached_degeneracy_table(p["N"], p["S"])
    rows = tabulate([float(j) for j in table.js()], [table.nu(j) for j in table.js()])
    total = table.total_states()
    return ResultEnvelope(config.echo(), [Column("j", "1"), Column("nu", "1")], rows,
                          {"total_states": total, "sum_rule": total == table.S.dimension ** table.N})


def cmd_distribution(config: RunConfig) -> ResultEnvelope:
    p = config.parameters
    spin = HalfInteger.spin(p["S"])
    mean, variance = qbdist.moments(p["N"], spin)
    diagnostics = {"gaussian_mean": mean, "gaussian_variance": variance}

    if p["kind"] == "exact":
        table = qbdeg.cached_degeneracy_table(p["N"], spin)
        js = table.js()
        rows = tabulate([float(j) for j in js], [qbdist.exact_pmf(table, j) for j in js])
        diagnostics["kolmogorov_distance"] = qbdist.kolmogorov_distance(table)
        return ResultEnvelope(config.echo(), [Column("j", "1"), Column("P", "1")], rows, diagnostics)

    js = np.linspace(0, mean + qbdist.CUTOFF_SIGMAS * math.sqrt(variance), p["points"])
    dist = qbdist.JDistribution.gaussian(p["N"], spin)
    diagnostics["normalization"] = dist.normalization
    rows = tabulate(js, qbdist.gaussian_pdf(p["N"], spin, js), qbdist.gaussian_cdf(p["N"], spin, js))
    return ResultEnvelope(config.echo(), [Column("j", "1"), Column("P", "1"), Column("F", "1")], rows, diagnostics)


def cmd_xy_evolve(config: RunConfig) -> ResultEnvelope:
    p = config.parameters
    params = _xy_params(p)
    grid = config.grid.values()
    series = qdxy.coherence_evolution(params, density_matrix(p["rho11"], p["rho12"]), grid / params.alpha)

    columns = [Column("t", "1/alpha"), *complex_columns("rho12_ratio"), Column("rho11", "1"), Column("rho22", "1")]
    rows = tabulate(grid, complex_values(series.ratio12), series.pop11, series.pop22())
    diagnostics = {**series.diagnostics, "tau_d": qdxy.decoherence_time(params).tau,
                   "psi": qdxy.asymptotic_coherence_closed_form(params)}
    return ResultEnvelope(config.echo(), columns, rows, diagnostics)


def _asymptote_row(params: qdxy.XYParams, rho11: float) -> List[float]:
    psi = qdxy.asymptotic_coherence(params)
    closed = qdxy.asymptotic_coherence_closed_form(params)
    population = qdxy.asymptotic_population(params, density_matrix(rho11, 0.0))
    return [float(params.S), params.mu / params.alpha, params.beta * params.g, psi, closed, population]


ASYMPTOTE_COLUMNS = [Column("S", "1"), Column("mu_over_alpha", "1"), Column("beta_g", "1"),
                     Column("psi", "1"), Column("psi_closed_form", "1"), Column("rho11_inf", "1")]
TAU_COLUMNS = [Column("S", "1"), Column("tau_d", "1/alpha"), Column("tau_min", "1/alpha")]


def _tau_row(params: qdxy.XYParams) -> List[float]:
    tau = qdxy.decoherence_time(params)
    # reported in units of 1/alpha
    return [float(params.S), tau.tau * params.alpha, tau.tau_min * params.alpha]


def cmd_xy_asymptote(config: RunConfig) -> ResultEnvelope:
    params = _xy_params(config.parameters)
    row = _asymptote_row(params, config.parameters["rho11"])
    return ResultEnvelope(config.echo(), ASYMPTOTE_COLUMNS, [row], {"psi_gap": abs(row[3] - row[4])})


def cmd_tau_d(config: RunConfig) -> ResultEnvelope:
    params = _xy_params(config.parameters)
    return ResultEnvelope(config.echo(), TAU_COLUMNS, [_tau_row(params)],
                          {"degenerate": qdxy.decoherence_time(params).degenerate})


def cmd_hp_boson(config: RunConfig) -> ResultEnvelope:
    p = config.parameters
    params = qdboson.BosonParams(p["S"], p["g"], p["alpha"], p["mu"], p["beta"], p["n_max"])
    grid = config.grid.values()
    series = qdboson.coherence_series(params, grid / params.alpha)
    rows = tabulate(grid, complex_values(series.ratio12))
    return ResultEnvelope(config.echo(), [Column("t", "1/alpha"), *complex_columns("rho12_ratio")], rows,
                          dict(series.diagnostics))


def _solution_diagnostics(solution: qdimf.MeanFieldSolution) -> Dict[str, object]:
    return {"m": solution.m, "Theta": solution.Theta, "Tc": solution.Tc, "ordered": solution.ordered,
            "decay_valid": solution.decay_valid, "iterations": solution.iterations}


def cmd_ising_mf(config: RunConfig) -> ResultEnvelope:
    p = config.parameters
    params = _ising_params(p)
    solution = qdimf.solve_order_parameter(params)
    grid = config.grid.values()
    times = grid / abs(params.J0)
    series = qdimf.g_meanfield(params, solution, times, p["method"])

    columns = [Column("t", "1/J0"), *complex_columns("g")]
    values = [grid, complex_values(series.ratio12)]
    diagnostics = _solution_diagnostics(solution)
    diagnostics["method"] = series.diagnostics["method"]
    if params.S in qdimf.SUPPORTED_SPINS:
        columns.append(Column("abs_g_limit", "1"))
        values.append(np.sqrt(qdimf.g_meanfield_limit(params, solution, times)))
        diagnostics["validity_bound"] = qdimf.validity_bound(params, solution)
    if not solution.decay_valid and solution.decay_valid is not None:
        logger.warning("gaussian decay condition violated, the mean-field |g| grows with time")
    return ResultEnvelope(config.echo(), columns, tabulate(*values), diagnostics)


def cmd_ising_exact(config: RunConfig) -> ResultEnvelope:
    params = _ising_params(config.parameters)
    table = qbdeg.cached_degeneracy_table(params.N, params.S)
    grid = config.grid.values()
    result = qdexact.g_exact(params, table, grid / abs(params.J0))

    diagnostics = {"revival_period": result.revival_period * abs(params.J0),
                   "gaussian_fit_sigma": result.gaussian_fit_sigma / params.J0 ** 2}
    try:
        revivals = qdexact.revival_diagnostics(result)
        diagnostics["revival_times"] = [t * abs(params.J0) for t in revivals.times]
        diagnostics["revival_amplitudes"] = revivals.amplitudes
    except InsufficientGridError as error:
        logger.info("no revival diagnostics: %s", error)
    rows = tabulate(grid, complex_values(result.series.ratio12))
    return ResultEnvelope(config.echo(), [Column("t", "1/J0"), *complex_columns("g")], rows, diagnostics)


def cmd_compare(config: RunConfig) -> ResultEnvelope:
    params = _ising_params(config.parameters)
    grid = config.grid.values()
    report = qdexact.meanfield_vs_exact(params, grid / abs(params.J0))
    diagnostics = {**_solution_diagnostics(report.solution), "max_deviation": report.max_deviation,
                   "revival_amplitude": report.revival_amplitude, "meanfield_monotone": report.meanfield_monotone}
    rows = tabulate(grid, report.exact, report.meanfield)
    return ResultEnvelope(config.echo(), [Column("t", "1/J0"), Column("abs_g_exact", "1"),
                                          Column("abs_g_meanfield", "1")], rows, diagnostics)


def _sweep_point(task: Tuple[str, str, float, Dict[str, object]]) -> List[float]:
    command, over, value, base = task
    parameters = dict(base)
    if over == "T":
        parameters["beta"] = 1 / value
    elif over == "N":
        parameters["N"] = int(value)
    else:
        parameters[over] = value
    params = _xy_params(parameters)
    row = _tau_row(params) if command == Subcommand.TAU_D.value else _asymptote_row(params, parameters["rho11"])
    return [value, *row]


def cmd_sweep(config: RunConfig) -> ResultEnvelope:
    sweep = config.sweep
    tasks = [(sweep.command.value, sweep.over, value, config.parameters) for value in sweep.values]
    if sweep.jobs > 1:
        # map keeps the sweep order whatever the completion order
        with ProcessPoolExecutor(max_workers=sweep.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(task) for task in tasks]

    columns = TAU_COLUMNS if sweep.command == Subcommand.TAU_D else ASYMPTOTE_COLUMNS
    unit = {"S": "1", "N": "1", "theta": "1", "beta": "1/energy"}.get(sweep.over, "energy")
    return ResultEnvelope(config.echo(), [Column(f"swept_{sweep.over}", unit), *columns], rows, {"points": len(rows)})


COMMANDS: Dict[Subcommand, Callable[[RunConfig], ResultEnvelope]] = {
    Subcommand.DEGENERACY: cmd_degeneracy,
    Subcommand.DISTRIBUTION: cmd_distribution,
    Subcommand.XY_EVOLVE: cmd_xy_evolve,
    Subcommand.XY_ASYMPTOTE: cmd_xy_asymptote,
    Subcommand.TAU_D: cmd_tau_d,
    Subcommand.HP_BOSON: cmd_hp_boson,
    Subcommand.ISING_MF: cmd_ising_mf,
    Subcommand.ISING_EXACT: cmd_ising_exact,
    Subcommand.COMPARE: cmd_compare,
    Subcommand.SWEEP: cmd_sweep,
}


def run(config: RunConfig) -> ResultEnvelope:
    logger.info("running %s", config.subcommand.value)
    return COMMANDS[config.subcommand](config)
