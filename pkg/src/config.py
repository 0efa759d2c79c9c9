"""Configuration management for mixphase.

Loads runtime settings from environment variables (a ``.env`` file is read
through python-dotenv) and an optional YAML settings file.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

DEFAULT_SETTINGS = Path(__file__).parent.parent / "config" / "settings.yaml"
VALID_FORMATS = ("json", "csv")
VALID_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_float(name: str, default: float) -> float:
    value = os.environ.get(name)
    return float(value) if value else default


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


@dataclass
class NumericsConfig:
    """Tolerances and grid defaults applied to every scenario."""

    gap_tol: float = 1e-8
    phase_tol: float = 1e-10
    convergence_tol: float = 1e-6
    default_steps: int = 20000

    @classmethod
    def from_env(cls) -> "NumericsConfig":
        """Load numerics configuration from environment variables."""
        return cls(
            gap_tol=_env_float("MIXPHASE_GAP_TOL", 1e-8),
            phase_tol=_env_float("MIXPHASE_PHASE_TOL", 1e-10),
            convergence_tol=_env_float("MIXPHASE_CONVERGENCE_TOL", 1e-6),
            default_steps=_env_int("MIXPHASE_DEFAULT_STEPS", 20000),
        )

    def scenario_defaults(self, scenario: Optional[str] = None) -> Dict[str, Any]:
        """Values seeded into scenario documents before their own fields.

        The built-in degenerate demo keeps its own step count.
        """
        defaults = {
            "gap_tol": self.gap_tol,
            "phase_tol": self.phase_tol,
            "convergence_tol": self.convergence_tol,
        }
        if scenario != "degenerate-demo":
            defaults["steps"] = self.default_steps
        return defaults


@dataclass
class RunConfig:
    """Execution and output settings."""

    workers: int = 1
    format: str = "json"

    @classmethod
    def from_env(cls) -> "RunConfig":
        """Load run configuration from environment variables."""
        return cls(
            workers=_env_int("MIXPHASE_WORKERS", 1),
            format=os.environ.get("MIXPHASE_FORMAT", "json"),
        )


@dataclass
class LoggingConfig:
    """Logging configuration."""

    level: str = "WARNING"
    file: Optional[str] = None

    @classmethod
    def from_env(cls) -> "LoggingConfig":
        """Load logging configuration from environment variables."""
        return cls(
            level=os.environ.get("MIXPHASE_LOG_LEVEL", "WARNING"),
            file=os.environ.get("MIXPHASE_LOG_FILE"),
        )


@dataclass
class Config:
    """Main configuration container."""

    numerics: NumericsConfig
    run: RunConfig
    logging: LoggingConfig

    @classmethod
    def from_env(cls) -> "Config":
        """Load all configuration from environment variables."""
        load_dotenv()
        return cls(
            numerics=NumericsConfig.from_env(),
            run=RunConfig.from_env(),
            logging=LoggingConfig.from_env(),
        )

    @classmethod
    def from_yaml(cls, path: Optional[str] = None) -> "Config":
        """Load configuration from YAML file, env vars override."""
        config_path = Path(path) if path else DEFAULT_SETTINGS

        if config_path.exists():
            with open(config_path, "r") as f:
                yaml_config = yaml.safe_load(f) or {}
        else:
            yaml_config = {}

        config = cls.from_env()

        # YAML fills in only what the environment left unset
        numerics = yaml_config.get("numerics", {})
        for name, env in (
            ("gap_tol", "MIXPHASE_GAP_TOL"),
            ("phase_tol", "MIXPHASE_PHASE_TOL"),
            ("convergence_tol", "MIXPHASE_CONVERGENCE_TOL"),
            ("default_steps", "MIXPHASE_DEFAULT_STEPS"),
        ):
            if name in numerics and not os.environ.get(env):
                caster = int if name == "default_steps" else float
                setattr(config.numerics, name, caster(numerics[name]))

        run = yaml_config.get("run", {})
        if "workers" in run and not os.environ.get("MIXPHASE_WORKERS"):
            config.run.workers = int(run["workers"])
        if "format" in run and not os.environ.get("MIXPHASE_FORMAT"):
            config.run.format = run["format"]

        logging_config = yaml_config.get("logging", {})
        if "level" in logging_config and not os.environ.get("MIXPHASE_LOG_LEVEL"):
            config.logging.level = logging_config["level"]

        return config

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors."""
        errors = []

        for name in ("gap_tol", "phase_tol", "convergence_tol"):
            if getattr(self.numerics, name) <= 0.0:
                errors.append(f"numerics.{name} must be positive")

        if self.numerics.default_steps < 2:
            errors.append("numerics.default_steps must be at least 2")

        if self.run.workers < 1:
            errors.append("run.workers must be at least 1")

        if self.run.format not in VALID_FORMATS:
            errors.append(f"run.format must be one of: {', '.join(VALID_FORMATS)}")

        if self.logging.level.upper() not in VALID_LEVELS:
            errors.append(f"logging.level must be one of: {', '.join(VALID_LEVELS)}")

        return errors
