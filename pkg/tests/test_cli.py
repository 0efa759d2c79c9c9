"""Tests for the mixphase command line."""

import io
import json
import logging

import pytest
from pathlib import Path

# Add repo root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import main
from src.scenarios.matrix_io import read_matrix_sequence
from src.utils.logging_config import ROOT_LOGGER

SCENARIO_DIR = Path(__file__).parent.parent / "config" / "scenarios"
DEPHASING = ["--scenario", "dephasing", "--lambda", "0.1"]


@pytest.fixture(autouse=True)
def isolated(monkeypatch):
    """Clear MIXPHASE_* settings and detach CLI log handlers afterwards."""
    for name in ("MIXPHASE_LOG_FILE", "MIXPHASE_LOG_LEVEL", "MIXPHASE_WORKERS",
                 "MIXPHASE_FORMAT", "MIXPHASE_DEFAULT_STEPS"):
        monkeypatch.delenv(name, raising=False)
    yield
    logger = logging.getLogger(ROOT_LOGGER)
    logger.handlers = []
    logger.setLevel(logging.NOTSET)


def run(argv):
    """Run the CLI and return (exit code, parsed stderr payload or None)."""
    stderr = io.StringIO()
    code = main(argv, stderr)
    text = stderr.getvalue().strip()
    return code, json.loads(text.splitlines()[-1]) if text else None


class TestCompute:
    """Test the compute command."""

    def test_dephasing(self, capsys):
        """Test a run prints one JSON record."""
        code, error = run(["compute", *DEPHASING, "--steps", "200"])

        assert code == 0
        assert error is None
        record = json.loads(capsys.readouterr().out.strip())
        assert record["gamma"] == pytest.approx(-1.1965, abs=1e-3)
        assert record["inputs"]["steps"] == 200
        assert record["diagnostics"]["convergence"] is not None

    def test_config_file_with_override(self, capsys):
        """Test flags override values from --config."""
        code, _ = run(["compute", "--config", str(SCENARIO_DIR / "dephasing.yaml"), "--steps", "100"])

        assert code == 0
        record = json.loads(capsys.readouterr().out.strip())
        assert record["inputs"]["steps"] == 100
        assert record["inputs"]["lambda"] == 0.1

    def test_lambda_ratio(self, capsys):
        """Test --lambda-ratio is scaled by η."""
        code, _ = run(["compute", "--scenario", "dephasing", "--eta", "2", "--lambda-ratio", "0.05", "--steps", "100"])

        assert code == 0
        record = json.loads(capsys.readouterr().out.strip())
        assert record["inputs"]["lambda"] == pytest.approx(0.1)
        assert record["inputs"]["lambda_ratio"] == pytest.approx(0.05)

    def test_out_file_csv(self, tmp_path, capsys):
        """Test --out and --format csv."""
        target = tmp_path / "results" / "run.csv"

        code, _ = run(["compute", *DEPHASING, "--steps", "100", "--format", "csv", "--out", str(target)])

        assert code == 0
        assert capsys.readouterr().out == ""
        lines = target.read_text().splitlines()
        assert lines[0].startswith("gamma,alpha,visibility")
        assert len(lines) == 2


class TestErrors:
    """Test exit codes and error payloads."""

    def test_missing_scenario(self):
        """Test no scenario is a configuration error."""
        code, error = run(["compute"])

        assert code == 2
        assert error["error"]["code"] == "INVALID_CONFIG"

    def test_invalid_field(self):
        """Test pydantic failures carry field details."""
        code, error = run(["compute", "--scenario", "dephasing", "--theta0", "5"])

        assert code == 2
        assert "theta0" in error["error"]["details"]

    def test_missing_config_file(self, tmp_path):
        """Test a missing --config file exits with status 2."""
        code, error = run(["compute", "--config", str(tmp_path / "missing.yaml")])

        assert code == 2
        assert error["error"]["code"] == "FILE_NOT_FOUND"

    def test_numerical_failure(self):
        """Test numerical contract failures exit with status 3."""
        code, error = run(["compute", "--scenario", "dephasing", "--lambda", "100", "--tau", "1", "--steps", "2"])

        assert code == 3
        assert error["error"]["code"] == "NEGATIVE_EIGENVALUE"
        assert "min_eigenvalue" in error["error"]["details"]

    def test_invalid_settings(self, tmp_path):
        """Test invalid runtime settings exit with status 2."""
        settings = tmp_path / "settings.yaml"
        settings.write_text("run:\n  workers: 0\n")

        code, error = run(["--settings", str(settings), "compute", *DEPHASING])

        assert code == 2
        assert error["error"]["details"]["errors"] == ["run.workers must be at least 1"]

    def test_unexpected_failure(self, mocker):
        """Test unexpected exceptions exit with status 1."""
        mocker.patch("src.cli.run_scenario", side_effect=RuntimeError("boom"))

        code, error = run(["compute", *DEPHASING, "--steps", "100"])

        assert code == 1
        assert error["error"]["code"] == "INTERNAL_ERROR"
        assert error["error"]["message"] == "boom"

    def test_missing_command(self):
        """Test argparse rejects a missing subcommand."""
        with pytest.raises(SystemExit) as exc_info:
            main([], io.StringIO())

        assert exc_info.value.code == 2


class TestSweep:
    """Test the sweep command."""

    def test_csv_table(self, capsys):
        """Test one CSV row per value, in order."""
        code, _ = run([
            "sweep", *DEPHASING, "--steps", "100", "--param", "theta0",
            "--values", "0.3,0.6", "--no-convergence", "--format", "csv",
        ])

        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("theta0,gamma")
        assert [line.split(",")[0] for line in lines[1:]] == ["0.3", "0.6"]

    def test_bad_values(self):
        """Test non-numeric values are a configuration error."""
        code, error = run(["sweep", *DEPHASING, "--param", "theta0", "--values", "a,b"])

        assert code == 2
        assert error["error"]["code"] == "INVALID_CONFIG"


class TestOtherCommands:
    """Test fringe, converge and export-schedule."""

    def test_fringe(self, capsys):
        """Test the fringe table and its header."""
        code, _ = run(["fringe", *DEPHASING, "--steps", "100", "--chi-points", "8"])

        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("# alpha=")
        assert lines[1].startswith("# nu=")
        assert lines[2] == "chi,intensity"
        assert len(lines) == 11

    def test_converge(self, capsys):
        """Test one JSON row per refinement level."""
        code, _ = run(["converge", *DEPHASING, "--steps", "50", "--levels", "2"])

        assert code == 0
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert [row["steps"] for row in rows] == [50, 100]

    def test_export_schedule(self, tmp_path, capsys):
        """Test the schedule file and the confirmation line."""
        target = tmp_path / "schedule.txt"

        code, _ = run(["export-schedule", *DEPHASING, "--steps", "50", "--out", str(target)])

        assert code == 0
        assert json.loads(capsys.readouterr().out)["path"] == str(target)
        _, matrices = read_matrix_sequence(target)
        assert matrices.shape == (51, 4, 4)

    def test_export_schedule_requires_out(self):
        """Test export-schedule refuses to write matrices to stdout."""
        code, error = run(["export-schedule", *DEPHASING, "--steps", "50"])

        assert code == 2
        assert error["error"]["code"] == "INVALID_CONFIG"
