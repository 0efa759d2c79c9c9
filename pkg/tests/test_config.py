"""Tests for runtime settings, structured logging and decorators."""

import io
import json
import logging

import numpy as np
import pytest
from pathlib import Path

# Add repo root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import Config, NumericsConfig
from src.utils.decorators import timed
from src.utils.logging_config import JSONFormatter, ROOT_LOGGER, log_with_fields, setup_logging

ENV_VARS = (
    "MIXPHASE_GAP_TOL",
    "MIXPHASE_PHASE_TOL",
    "MIXPHASE_CONVERGENCE_TOL",
    "MIXPHASE_DEFAULT_STEPS",
    "MIXPHASE_WORKERS",
    "MIXPHASE_FORMAT",
    "MIXPHASE_LOG_LEVEL",
    "MIXPHASE_LOG_FILE",
)


@pytest.fixture
def clean_env(monkeypatch):
    """Remove every MIXPHASE_* variable."""
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def mixphase_logger():
    """Root mixphase logger, restored after the test."""
    logger = logging.getLogger(ROOT_LOGGER)
    yield logger
    logger.handlers = []
    logger.setLevel(logging.NOTSET)


class TestConfig:
    """Test runtime settings."""

    def test_defaults(self, clean_env):
        """Test defaults when nothing is set."""
        config = Config.from_env()

        assert config.numerics.gap_tol == 1e-8
        assert config.numerics.default_steps == 20000
        assert config.run.workers == 1
        assert config.run.format == "json"
        assert config.logging.level == "WARNING"
        assert config.logging.file is None
        assert config.validate() == []

    def test_env_values(self, clean_env):
        """Test environment variables are read."""
        clean_env.setenv("MIXPHASE_GAP_TOL", "1e-6")
        clean_env.setenv("MIXPHASE_WORKERS", "4")
        clean_env.setenv("MIXPHASE_FORMAT", "csv")

        config = Config.from_env()

        assert config.numerics.gap_tol == 1e-6
        assert config.run.workers == 4
        assert config.run.format == "csv"

    def test_yaml_fills_unset(self, clean_env, tmp_path):
        """Test YAML values apply where the environment is silent."""
        path = tmp_path / "settings.yaml"
        path.write_text(
            "numerics:\n  default_steps: 500\n  phase_tol: 1.0e-9\n"
            "run:\n  workers: 2\n"
            "logging:\n  level: DEBUG\n"
        )

        config = Config.from_yaml(str(path))

        assert config.numerics.default_steps == 500
        assert config.numerics.phase_tol == 1e-9
        assert config.run.workers == 2
        assert config.logging.level == "DEBUG"

    def test_env_beats_yaml(self, clean_env, tmp_path):
        """Test environment variables override the settings file."""
        path = tmp_path / "settings.yaml"
        path.write_text("run:\n  workers: 2\n")
        clean_env.setenv("MIXPHASE_WORKERS", "8")

        config = Config.from_yaml(str(path))

        assert config.run.workers == 8

    def test_missing_yaml(self, clean_env, tmp_path):
        """Test a missing settings file falls back to defaults."""
        config = Config.from_yaml(str(tmp_path / "missing.yaml"))

        assert config.numerics.default_steps == 20000

    def test_bundled_settings(self, clean_env):
        """Test config/settings.yaml loads and validates."""
        config = Config.from_yaml()

        assert config.numerics.convergence_tol == 1e-6
        assert config.validate() == []

    def test_validate_reports_each_problem(self, clean_env):
        """Test validate lists every invalid setting."""
        config = Config.from_env()
        config.numerics.gap_tol = 0.0
        config.numerics.default_steps = 1
        config.run.workers = 0
        config.run.format = "xml"
        config.logging.level = "LOUD"

        errors = config.validate()

        assert len(errors) == 5
        assert "numerics.gap_tol must be positive" in errors

    def test_scenario_defaults(self):
        """Test the demo keeps its own step count."""
        numerics = NumericsConfig(default_steps=123)

        assert numerics.scenario_defaults("dephasing")["steps"] == 123
        assert "steps" not in numerics.scenario_defaults("degenerate-demo")


class TestLogging:
    """Test structured JSON logging."""

    def test_formatter_includes_fields(self):
        """Test extra fields and numpy values are serialised."""
        record = logging.LogRecord("mixphase.test", logging.INFO, __file__, 1, "hello", None, None)
        record.extra_fields = {"gamma": np.float64(-1.2), "blocks": np.array([1, 2])}

        data = json.loads(JSONFormatter().format(record))

        assert data["message"] == "hello"
        assert data["level"] == "INFO"
        assert data["gamma"] == -1.2
        assert data["blocks"] == [1, 2]

    def test_log_with_fields(self, mixphase_logger):
        """Test log_with_fields emits one JSON line through setup_logging."""
        stream = io.StringIO()
        setup_logging("INFO", logging.StreamHandler(stream))

        log_with_fields(logging.getLogger("mixphase.scenarios"), "info", "Scenario finished",
                        event="scenario_finished", steps=200)

        data = json.loads(stream.getvalue().strip())
        assert data["logger"] == "mixphase.scenarios"
        assert data["event"] == "scenario_finished"
        assert data["steps"] == 200

    def test_level_filters(self, mixphase_logger):
        """Test records below the configured level are dropped."""
        stream = io.StringIO()
        setup_logging("WARNING", logging.StreamHandler(stream))

        log_with_fields(logging.getLogger("mixphase.lindblad"), "debug", "Integration finished", steps=10)

        assert stream.getvalue() == ""

    def test_setup_replaces_handlers(self, mixphase_logger):
        """Test repeated setup leaves a single handler."""
        setup_logging("INFO", logging.StreamHandler(io.StringIO()))
        logger = setup_logging("INFO", logging.StreamHandler(io.StringIO()))

        assert len(logger.handlers) == 1


class TestTimed:
    """Test the timed decorator."""

    def test_logs_elapsed(self, caplog):
        """Test the wrapped call's result and its timing event."""
        @timed("unit_timed", logger_name="mixphase.test")
        def add(a, b):
            return a + b

        with caplog.at_level(logging.DEBUG, logger="mixphase.test"):
            assert add(1, 2) == 3

        record = caplog.records[-1]
        assert record.extra_fields["event"] == "unit_timed"
        assert record.extra_fields["elapsed_sec"] >= 0.0
        assert add.__name__ == "add"

    def test_logs_on_failure(self, caplog):
        """Test a failing call is still timed and the error propagates."""
        @timed("unit_timed", logger_name="mixphase.test")
        def fail():
            raise RuntimeError("boom")

        with caplog.at_level(logging.DEBUG, logger="mixphase.test"):
            with pytest.raises(RuntimeError):
                fail()

        assert caplog.records[-1].extra_fields["event"] == "unit_timed"
