import json

import numpy as np
import pytest

from qubath import __version__
from qubath.cli.config import Subcommand, parse_and_validate, read_config_file
from qubath.cli.envelope import Column, ResultEnvelope
from qubath.cli.main import EXIT_CONFIG_ERROR, EXIT_MODULE_ERROR, EXIT_OK, main
from qubath.cli.plotting import emit_plot
from qubath.exceptions import ConfigError, PlotError

FIG1_SWEEP = ["sweep", "--over", "S", "--values", "0.5,1,1.5,2,5,10", "--command", "xy-asymptote",
              "--mu", "1", "--alpha", "1", "--g", "1", "--beta", "0.1"]


def indented_string(s: str, ident: str = '    '):
    return '\n'.join([ident + l for l in s.splitlines()])


def run_json(argv, tmp_path, name="result.json"):
    path = tmp_path / name
    code = main([*argv, "--output", str(path)])
    assert code == EXIT_OK, f"{argv} should succeed, exit code {code}"
    return ResultEnvelope.from_json(path.read_text())


class TestParsing:

    def test_invalid_spin_is_a_configuration_error(self, capsys):
        code = main(["degeneracy", "--N", "4", "--S", "0.4"])
        assert code == EXIT_CONFIG_ERROR, f"a spin of 0.4 should be rejected, exit code {code}"
        assert "configuration error" in capsys.readouterr().err

    def test_decreasing_grid(self):
        with pytest.raises(ConfigError) as error:
            parse_and_validate(["xy-evolve", "--T", "1", "--t-min", "5", "--t-max", "1"])
        assert error.value.key == "t-max"

    def test_single_point_grid(self):
        with pytest.raises(ConfigError) as error:
            parse_and_validate(["ising-mf", "--N", "10", "--S", "1", "--points", "1"])
        assert error.value.key == "points"

    @pytest.mark.parametrize("argv, key", [
        (["xy-evolve", "--T", "1", "--alpha", "0"], "alpha"),
        (["xy-evolve", "--T", "-1"], "T"),
        (["ising-mf", "--N", "10", "--S", "1", "--J0", "0"], "J0"),
        (["hp-boson", "--S", "5", "--beta", "0"], "beta*g*S"),
        (["xy-asymptote", "--T", "1", "--rho11", "1.5"], "rho11"),
    ])
    def test_invalid_parameter_names_its_key(self, argv, key):
        with pytest.raises(ConfigError) as error:
            parse_and_validate(argv)
        assert error.value.key == key, \
            f"the diagnostic should name {key}:" + \
            f"\n- got: {error.value.key}: {error.value.message}"

    def test_mean_field_parameter_set(self):
        config = parse_and_validate(["ising-mf", "--S", "1", "--J", "2", "--w", "1", "--T", "2.52", "--N", "10000"])
        assert config.subcommand == Subcommand.ISING_MF
        assert config.parameters["w"] == 1.0 and config.parameters["N"] == 10000

    def test_coupling_follows_temperature(self):
        config = parse_and_validate(["ising-exact", "--N", "10", "--S", "1", "--T", "2.5", "--J-equals-T",
                                     "--beta-from-T"])
        assert config.parameters["J"] == 2.5

    def test_flags_override_config_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# bath\nN = 6\nS = 1   # spin one\n\nJ_equals_T = true\nT = 2\n")
        config = parse_and_validate(["ising-exact", "--config", str(path), "--N", "4"])
        assert config.parameters["N"] == 4, "the command line flag should win over the file"
        assert config.parameters["S"] == "1"
        assert config.parameters["J"] == 2.0, "a true value should toggle the switch"

    def test_config_file_format(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("mu = 1\nverbose_flag = false\nt_max = 20\n")
        assert read_config_file(path) == ["--mu", "1", "--t-max", "20"]

    def test_malformed_config_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("N 10\n")
        with pytest.raises(ConfigError):
            parse_and_validate(["degeneracy", "--config", str(path)])

    def test_sweep_needs_a_temperature(self):
        with pytest.raises(ConfigError):
            parse_and_validate(["sweep", "--over", "S", "--values", "1,2", "--command", "tau-d"])


class TestCommands:

    def test_degeneracy_table_on_standard_output(self, capsys):
        assert main(["degeneracy", "--N", "4", "--S", "1/2"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["j(1),nu(1)", "0,2", "1,3", "2,1"], \
            "unexpected degeneracy table:" + \
            f"\n{indented_string(chr(10).join(lines))}"

    def test_output_is_deterministic(self, capsys):
        argv = ["xy-evolve", "--T", "2", "--S", "3/2", "--points", "21"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first, "identical configurations must give identical bytes"

    def test_asymptote_envelope(self, tmp_path):
        envelope = run_json(["xy-asymptote", "--T", "10", "--mu", "1", "--S", "2"], tmp_path)
        assert envelope.version == __version__
        assert envelope.config["subcommand"] == "xy-asymptote" and envelope.config["beta"] == pytest.approx(0.1)
        psi, closed = envelope.column("psi")[0], envelope.column("psi_closed_form")[0]
        assert abs(psi - closed) < 1e-8, f"quadrature {psi} and closed form {closed} should agree"
        assert [c.unit for c in envelope.columns][:1] == ["1"]

    def test_fig1_sweep(self, tmp_path):
        envelope = run_json(FIG1_SWEEP, tmp_path)
        psi = envelope.column("psi")
        assert len(envelope.rows) == 6
        assert np.all(np.diff(psi) >= 0), f"psi should not decrease with S, got {psi}"

    def test_parallel_sweep_keeps_the_order(self, tmp_path):
        serial = run_json(FIG1_SWEEP, tmp_path, "serial.json")
        parallel = run_json([*FIG1_SWEEP, "--jobs", "2"], tmp_path, "parallel.json")
        assert parallel.rows == serial.rows

    def test_temperature_sweep(self, tmp_path):
        envelope = run_json(["sweep", "--over", "T", "--values", "0.5,1,2", "--command", "tau-d"], tmp_path)
        taus = envelope.column("tau_d")
        assert np.all(np.diff(taus) < 0), f"tau_D should shrink as the bath heats up, got {taus}"

    def test_bosonic_series(self, tmp_path):
        envelope = run_json(["hp-boson", "--S", "5", "--beta", "0.01", "--t-max", "10", "--points", "11"], tmp_path)
        assert envelope.columns[0] == Column("t", "1/alpha")
        assert abs(envelope.column("abs_rho12_ratio")[0] - 1) < 1e-12
        assert envelope.diagnostics["tail_weight"] <= 1e-14

    def test_exact_revivals(self, tmp_path):
        envelope = run_json(["ising-exact", "--N", "10", "--S", "1", "--J-equals-T", "--beta-from-T",
                             "--t-max", "45"], tmp_path)
        period = envelope.diagnostics["revival_period"]
        assert period == pytest.approx(2 * np.pi * np.sqrt(10)), "J0 t revives every 2 pi sqrt(N)"
        assert envelope.diagnostics["revival_amplitudes"][0] > 0.95

    def test_module_error_is_reported(self, capsys):
        code = main(["compare", "--N", "50", "--S", "1", "--J", "1", "--T", "2"])
        assert code == EXIT_MODULE_ERROR
        failure = json.loads(capsys.readouterr().err)
        assert failure["diagnostics"]["error"] == "DisorderedBathError"
        assert failure["config"]["T"] == 2.0


class TestPlotting:

    def test_plots_are_reproducible(self, tmp_path):
        argv = ["ising-mf", "--N", "10000", "--S", "1", "--J", "2", "--w", "1", "--T", "2.52", "--points", "51"]
        assert main([*argv, "-o", str(tmp_path / "a.svg")]) == EXIT_OK
        assert main([*argv, "-o", str(tmp_path / "b.svg")]) == EXIT_OK
        first, second = (tmp_path / "a.svg").read_bytes(), (tmp_path / "b.svg").read_bytes()
        assert first.startswith(b"<?xml"), "expected an svg document"
        assert first == second, "identical envelopes must render to identical bytes"

    def test_empty_envelope(self, tmp_path):
        envelope = ResultEnvelope({}, [Column("t", "1/J0"), Column("abs_g", "1")], [])
        with pytest.raises(PlotError):
            emit_plot(envelope, tmp_path / "empty.svg")

    def test_unknown_column(self, tmp_path):
        envelope = ResultEnvelope({}, [Column("t", "1/J0"), Column("abs_g", "1")], [[0.0, 1.0], [1.0, 0.5]])
        with pytest.raises(PlotError):
            emit_plot(envelope, tmp_path / "bad.svg", y=["psi"])

    def test_svg_needs_a_path(self):
        with pytest.raises(ConfigError):
            parse_and_validate(["degeneracy", "--N", "3", "--S", "1", "--format", "svg"])
