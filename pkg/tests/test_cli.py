"""Command-line interface: config loading, artifacts, exit codes."""

import json
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from hnls_utm.cli import load_scenario, main
from hnls_utm.errors import ConfigInvalid

BASE = {
    "dispersion": {"beta": 1.0, "alpha": 0.0, "delta": 0.0},
    "geometry": {"ell": 1.0, "horizon": 0.1},
    "data": {
        "u0": {"preset": "zero"},
        "g0": {"preset": "zero"},
        "h0": {"preset": "bump"},
        "h1": {"preset": "zero"},
    },
    "solver": {
        "grid": [33, 17],
        "budget": {"contour_nodes": 6000, "real_axis_window": 15.0,
                   "real_axis_nodes": 3000},
    },
}


def write_config(tmp_path, doc, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return str(path)


class TestLoadScenario:
    def test_minimal_document(self, tmp_path):
        cfg = load_scenario(write_config(tmp_path, BASE))
        assert cfg.params.beta == 1.0
        assert cfg.grid == (33, 17)
        assert cfg.data.horizon == 0.1

    def test_missing_field_named(self, tmp_path):
        doc = {k: v for k, v in BASE.items() if k != "dispersion"}
        doc["dispersion"] = {"alpha": 0.0, "delta": 0.0}
        with pytest.raises(ConfigInvalid, match="dispersion.beta"):
            load_scenario(write_config(tmp_path, doc))

    def test_bad_number_rejected(self, tmp_path):
        doc = dict(BASE, geometry={"ell": "wide", "horizon": 0.1})
        with pytest.raises(ConfigInvalid):
            load_scenario(write_config(tmp_path, doc))


class TestSolveVerb:
    def test_reduced_mode_artifacts(self, tmp_path):
        config = write_config(tmp_path, BASE)
        out = tmp_path / "out"
        result = CliRunner().invoke(main, ["solve", "--config", config,
                                           "--mode", "reduced",
                                           "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "field.csv").exists()
        assert (out / "norms.csv").exists()
        diag = json.loads((out / "diagnostics.json").read_text())
        assert diag["mode"] == "reduced"
        assert "trace_recovery_gaps" in diag

    def test_config_error_exit_2(self, tmp_path):
        doc = {k: v for k, v in BASE.items() if k != "dispersion"}
        config = write_config(tmp_path, doc)
        result = CliRunner().invoke(main, ["solve", "--config", config,
                                           "--out", str(tmp_path / "o")])
        assert result.exit_code == 2

    def test_unknown_mode_exit_2(self, tmp_path):
        config = write_config(tmp_path, BASE)
        result = CliRunner().invoke(main, ["solve", "--config", config,
                                           "--mode", "magic",
                                           "--out", str(tmp_path / "o")])
        assert result.exit_code == 2

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_solver_failure_exit_3(self, tmp_path):
        doc = dict(BASE)
        doc["data"] = dict(BASE["data"],
                           u0={"preset": "gaussian", "center": 0.5,
                               "width": 0.15},
                           h0={"preset": "zero"})
        doc["nonlinearity"] = {"kappa_re": 1e6, "lambda": 3.0}
        doc["solver"] = dict(BASE["solver"], oracle={"nx": 32, "nt": 16})
        config = write_config(tmp_path, doc)
        out = tmp_path / "o3"
        result = CliRunner().invoke(main, ["solve", "--config", config,
                                           "--mode", "oracle",
                                           "--out", str(out)])
        assert result.exit_code == 3
        diag = json.loads((out / "diagnostics.json").read_text())
        assert diag["error"] == "StepDiverged"


class TestVerifyVerb:
    def test_pass_and_determinism(self, tmp_path):
        runner = CliRunner()
        args = ["verify", "--suite", "mvt", "--seed", "5"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == 0
        assert first.output == second.output  # byte-identical reports

    def test_writes_report_file(self, tmp_path):
        out = tmp_path / "rep"
        result = CliRunner().invoke(main, ["verify", "--suite", "rtotau",
                                           "--seed", "1", "--out", str(out)])
        assert result.exit_code == 0
        report = json.loads((out / "verify_rtotau.json").read_text())
        assert report["passed"]


class TestNormsVerb:
    def test_data_norm_rows(self, tmp_path):
        config = write_config(tmp_path, BASE)
        out = tmp_path / "n"
        result = CliRunner().invoke(main, ["norms", "--config", config,
                                           "--out", str(out)])
        assert result.exit_code == 0
        text = (out / "data_norms.csv").read_text() \
            if (out / "data_norms.csv").exists() else result.output
        assert "data_norm_sum" in text
