"""Pydantic validators for mixphase scenario documents."""

import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import ConfigError

VALID_SCENARIOS = ("dephasing", "unitary-precession", "custom-lindblad", "imported-path", "degenerate-demo")
SWEEPABLE = ("theta0", "eta", "lambda", "lambda_ratio", "tau", "steps", "weight")
DEFAULT_STEPS = 20000
DEMO_STEPS = 2000

ScenarioName = Literal["dephasing", "unitary-precession", "custom-lindblad", "imported-path", "degenerate-demo"]


def _parse_entry(value: Any) -> complex:
    """Matrix entry given as a number, a [re, im] pair or a string such as '1-2j'."""
    if isinstance(value, bool):
        raise ValueError("Matrix entries must be numbers")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    raise ValueError(f"Cannot read matrix entry {value!r}")


def _parse_matrix(value: Any) -> List[List[complex]]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ValueError("Matrix must be a non-empty list of rows")
    rows = [[_parse_entry(entry) for entry in row] for row in value]
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise ValueError("Matrix must be square")
    return rows


class ScenarioConfig(BaseModel):
    """One scenario run: physical parameters, grid, tolerances and output target."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    scenario: ScenarioName = Field(..., description="Scenario name")
    eta: float = Field(default=1.0, gt=0.0, description="Precession rate")
    lam: float = Field(default=0.0, ge=0.0, alias="lambda", description="Dephasing strength")
    theta0: float = Field(default=math.pi / 3, description="Initial polar angle in radians")
    tau: Optional[float] = Field(None, gt=0.0, description="Duration; one period 2*pi/eta when omitted")
    steps: int = Field(default=DEFAULT_STEPS, ge=2, description="Uniform grid steps")
    weight: float = Field(default=0.9, gt=0.5, le=1.0, description="Dominant branch weight p for unitary-precession")
    dimension: Optional[int] = Field(None, ge=1, description="Hilbert-space dimension for custom-lindblad")
    hamiltonian: Optional[List[List[Any]]] = Field(None, description="Hamiltonian entries")
    jump_operators: List[List[List[Any]]] = Field(default_factory=list, description="Jump operator entries")
    rates: Optional[List[float]] = Field(None, description="Rates scaling the jump operators")
    rho0: Optional[List[List[Any]]] = Field(None, description="Initial density operator entries")
    path_file: Optional[str] = Field(None, description="Matrix-sequence file for imported-path")
    gap_tol: float = Field(default=1e-8, gt=0.0, description="Degeneracy gap tolerance")
    phase_tol: float = Field(default=1e-10, gt=0.0, description="Undefined-phase magnitude threshold")
    convergence_tol: float = Field(default=1e-6, gt=0.0, description="Requested accuracy of gamma")
    designated: Tuple[int, int] = Field(default=(0, 0), description="Designated W column (k0, l0)")
    out: Optional[str] = Field(None, description="Output file; stdout when omitted")
    format: Literal["json", "csv"] = Field(default="json", description="Output format")
    workers: int = Field(default=1, ge=1, le=64, description="Concurrent sweep workers")

    @field_validator('theta0')
    @classmethod
    def validate_theta0(cls, v: float) -> float:
        """Polar angles live in [0, pi]."""
        if not 0.0 <= v <= math.pi:
            raise ValueError("theta0 must lie in [0, pi]")
        return v

    @field_validator('hamiltonian', 'rho0')
    @classmethod
    def validate_matrix(cls, v: Optional[List[List[Any]]]) -> Optional[List[List[complex]]]:
        """Entries parse to complex numbers and the matrix is square."""
        if v is None:
            return v
        return _parse_matrix(v)

    @field_validator('jump_operators')
    @classmethod
    def validate_jump_operators(cls, v: List[List[List[Any]]]) -> List[List[List[complex]]]:
        """Each jump operator is a square matrix."""
        return [_parse_matrix(operator) for operator in v]

    @field_validator('rates')
    @classmethod
    def validate_rates(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        """Rates are non-negative."""
        if v is not None and any(rate < 0.0 for rate in v):
            raise ValueError("rates must be non-negative")
        return v

    @field_validator('path_file')
    @classmethod
    def validate_path_file(cls, v: Optional[str]) -> Optional[str]:
        """Referenced matrix file exists."""
        if v is not None and not Path(v).is_file():
            raise ValueError(f"path_file does not exist: {v}")
        return v

    @model_validator(mode='after')
    def validate_scenario_fields(self) -> "ScenarioConfig":
        """Per-scenario required fields and cross-field consistency."""
        if self.scenario == "custom-lindblad":
            if self.hamiltonian is None or self.rho0 is None:
                raise ValueError("custom-lindblad requires hamiltonian and rho0")
            size = len(self.hamiltonian)
            if self.dimension is not None and self.dimension != size:
                raise ValueError("dimension does not match the hamiltonian")
            if len(self.rho0) != size or any(len(op) != size for op in self.jump_operators):
                raise ValueError("rho0 and jump_operators must match the hamiltonian dimension")
            if self.rates is not None and len(self.rates) != len(self.jump_operators):
                raise ValueError("rates must have one entry per jump operator")
        if self.scenario == "imported-path" and self.path_file is None:
            raise ValueError("imported-path requires path_file")
        if self.scenario == "degenerate-demo" and "steps" not in self.model_fields_set:
            self.steps = DEMO_STEPS
        dim = self.system_dim
        if dim is not None and not all(0 <= i < dim for i in self.designated):
            raise ValueError("designated indices must lie in [0, dimension)")
        return self

    @property
    def duration(self) -> float:
        """tau, or one precession period when unset."""
        return self.tau if self.tau is not None else 2.0 * math.pi / self.eta

    @property
    def system_dim(self) -> Optional[int]:
        if self.scenario in ("dephasing", "unitary-precession"):
            return 2
        if self.scenario == "degenerate-demo":
            return 4
        if self.hamiltonian is not None:
            return len(self.hamiltonian)
        return self.dimension

    @property
    def lambda_ratio(self) -> float:
        return self.lam / self.eta

    def matrix(self, name: str) -> np.ndarray:
        """hamiltonian or rho0 as a complex array."""
        return np.array(getattr(self, name), dtype=complex)

    def jump_matrices(self) -> List[np.ndarray]:
        return [np.array(op, dtype=complex) for op in self.jump_operators]

    def with_overrides(self, **overrides) -> "ScenarioConfig":
        """Re-validated copy with the non-None overrides applied.

        ``lambda`` and ``lambda_ratio`` (Λ/η) both set the dephasing strength.
        """
        data = self.model_dump(exclude_unset=True)
        data["scenario"] = self.scenario
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "lambda":
                data["lam"] = value
            elif key == "lambda_ratio":
                data["lam"] = value * overrides.get("eta", data.get("eta", self.eta))
            else:
                data[key] = value
        return ScenarioConfig.model_validate(data)

    def echo(self) -> Dict[str, Any]:
        """Inputs echoed into result records."""
        echo = {
            "scenario": self.scenario,
            "steps": self.steps,
            "tau": self.duration,
            "gap_tol": self.gap_tol,
            "phase_tol": self.phase_tol,
        }
        if self.scenario in ("dephasing", "unitary-precession"):
            echo.update({"eta": self.eta, "lambda": self.lam, "theta0": self.theta0,
                         "lambda_ratio": self.lambda_ratio})
        if self.scenario == "unitary-precession":
            echo["weight"] = self.weight
        if self.scenario == "imported-path":
            echo["path_file"] = self.path_file
        return echo

    @classmethod
    def from_yaml(cls, path, defaults: Optional[Dict[str, Any]] = None) -> "ScenarioConfig":
        """Load and validate a YAML scenario document.

        Args:
            path: Scenario file path
            defaults: Values applied before the file's own (e.g. settings.yaml numerics)

        Raises:
            FileNotFoundError: If the file is missing
            ConfigError: If the file is not a YAML mapping
            pydantic.ValidationError: If a field is invalid
        """
        data = dict(defaults or {})
        data.update(load_document(path))
        return cls.model_validate(data)


def load_document(path) -> Dict[str, Any]:
    """Read a YAML scenario document as a plain mapping.

    Raises:
        FileNotFoundError: If the file is missing
        ConfigError: If the file is not valid YAML or not a mapping
    """
    with open(path, 'r') as f:
        try:
            document = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in scenario file: {e}", {"path": str(path)})
    if not isinstance(document, dict):
        raise ConfigError("Scenario file must contain a mapping", {"path": str(path)})
    return document
