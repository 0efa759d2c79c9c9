"""Scenario execution: single runs, sweeps, fringes, refinement studies, schedules."""

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np
from pydantic import ValidationError

from ..lindblad.dephasing import (
    bloch_state,
    dephasing_density_matrix,
    dephasing_model,
    dephasing_phase_closed_form,
    dephasing_phase_first_order,
    unitary_precession_phase,
)
from ..lindblad.integrator import integrate
from ..lindblad.models import DephasingQubitParams, LindbladModel, TimeGrid
from ..numkernel.errors import MixphaseError, PreconditionError, UndefinedPhaseError
from ..phase.functional import geometric_phase, interference_profile, phase_distance, visibility, wrap_phase
from ..phase.holonomy import geometric_phase_degenerate
from ..phase.models import PhaseResult
from ..purification.construct import (
    build_connecting_unitary,
    build_Usa,
    build_W_path,
    parallel_transport_correction,
)
from ..spectral.decompose import decompose_path
from ..spectral.models import DegeneracyStructure, SpectralPath, StatePath
from ..utils.decorators import timed
from ..utils.logging_config import log_with_fields
from .demo import DEMO_TAU, degenerate_demo_path
from .errors import ConfigError, payload_for
from .matrix_io import read_state_path, write_matrix_sequence
from .validators import SWEEPABLE, ScenarioConfig

logger = logging.getLogger("mixphase.scenarios")

MIN_CHI_POINTS = 4
CONVERGENCE_FLAG_FACTOR = 10.0


@dataclass
class ResultRecord:
    """Outcome of one scenario run, or of one failed sweep point when ``error`` is set."""

    inputs: Dict[str, Any]
    gamma: Optional[float] = None
    alpha: Optional[float] = None
    visibility: Optional[float] = None
    gamma_closed_form: Optional[float] = None
    gamma_first_order: Optional[float] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> Dict[str, Any]:
        """Convert ResultRecord to dictionary."""
        return {
            "inputs": self.inputs,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "visibility": self.visibility,
            "gamma_closed_form": self.gamma_closed_form,
            "gamma_first_order": self.gamma_first_order,
            "diagnostics": self.diagnostics,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ResultRecord":
        """Create ResultRecord from dictionary."""
        return cls(
            inputs=data.get("inputs", {}),
            gamma=data.get("gamma"),
            alpha=data.get("alpha"),
            visibility=data.get("visibility"),
            gamma_closed_form=data.get("gamma_closed_form"),
            gamma_first_order=data.get("gamma_first_order"),
            diagnostics=data.get("diagnostics", {}),
            error=data.get("error"),
        )


@dataclass(frozen=True)
class FringeData:
    """Interference profile rows (χ, intensity) with the α and ν that produced them."""

    chi: np.ndarray
    intensity: np.ndarray
    alpha: Optional[float]
    nu: float

    def rows(self) -> List[Tuple[float, float]]:
        return [(float(c), float(i)) for c, i in zip(self.chi, self.intensity)]


def build_state_path(cfg: ScenarioConfig, steps: Optional[int] = None) -> StatePath:
    """Generate or load the density-operator path a scenario describes."""
    steps = cfg.steps if steps is None else steps
    if cfg.scenario == "imported-path":
        return read_state_path(cfg.path_file)
    if cfg.scenario == "degenerate-demo":
        return degenerate_demo_path(steps, cfg.tau if cfg.tau is not None else DEMO_TAU)

    grid = TimeGrid(cfg.duration, steps)
    if cfg.scenario == "dephasing":
        return integrate(dephasing_model(cfg.eta, cfg.lam), bloch_state(cfg.theta0), grid)
    if cfg.scenario == "unitary-precession":
        rho0 = bloch_state(cfg.theta0, radius=2.0 * cfg.weight - 1.0)
        return integrate(dephasing_model(cfg.eta, 0.0), rho0, grid)

    model = LindbladModel.from_rates(cfg.matrix("hamiltonian"), cfg.jump_matrices(), cfg.rates)
    return integrate(model, cfg.matrix("rho0"), grid)


def phase_of_path(path: StatePath, cfg: ScenarioConfig) -> Tuple[PhaseResult, SpectralPath, DegeneracyStructure]:
    """Decompose a path and evaluate the abelian or, for weighted degenerate blocks, the block phase."""
    spectral, structure = decompose_path(path, gap_tol=cfg.gap_tol)
    try:
        result = geometric_phase(spectral, structure, cfg.phase_tol)
    except PreconditionError:
        result = geometric_phase_degenerate(spectral, structure, cfg.phase_tol)
    return result, spectral, structure


def _oracles(cfg: ScenarioConfig) -> Tuple[Optional[float], Optional[float]]:
    if cfg.scenario == "dephasing":
        if cfg.theta0 > math.pi / 2 or abs(cfg.duration - 2.0 * math.pi / cfg.eta) > 1e-12 * cfg.duration:
            return None, None
        params = DephasingQubitParams(cfg.eta, cfg.lam, cfg.theta0, cfg.duration)
        return dephasing_phase_closed_form(params), dephasing_phase_first_order(params)
    if cfg.scenario == "unitary-precession":
        try:
            return unitary_precession_phase(cfg.eta, cfg.theta0, cfg.duration, cfg.weight, cfg.phase_tol), None
        except UndefinedPhaseError:
            return None, None
    return None, None


def _max_residual(diagnostics: Dict[str, Any]) -> Optional[float]:
    if "transport_residual" in diagnostics:
        return float(max(diagnostics["transport_residual"], default=0.0))
    residuals = diagnostics.get("block_transport_residual")
    if residuals:
        return float(max(residuals.values()))
    return None


@timed("scenario_timed", logger_name="mixphase.scenarios")
def run_scenario(cfg: ScenarioConfig, estimate_convergence: bool = True) -> ResultRecord:
    """Run one scenario end to end.

    Args:
        cfg: Validated scenario configuration
        estimate_convergence: Re-run on a grid with twice the steps and
            report |γ(Δt) − γ(Δt/2)| (skipped for imported paths)

    Returns:
        ResultRecord with phases, oracles and diagnostics

    Raises:
        MixphaseError: Any numerical contract failure along the pipeline
    """
    path = build_state_path(cfg)
    result, spectral, structure = phase_of_path(path, cfg)
    closed_form, first_order = _oracles(cfg)

    diagnostics = {
        "min_gap": result.diagnostics.get("min_gap"),
        "trace_drift": path.trace_drift(),
        "transport_residual": _max_residual(result.diagnostics),
        "grid_size": spectral.n_samples,
        "blocks": [list(block) for block in structure.blocks],
        "null_branches": list(spectral.null_branches),
        "convergence": None,
        "convergence_flag": False,
    }
    if estimate_convergence and cfg.scenario != "imported-path":
        refined, _, _ = phase_of_path(build_state_path(cfg, 2 * cfg.steps), cfg)
        convergence = phase_distance(result.gamma, refined.gamma)
        diagnostics["convergence"] = convergence
        diagnostics["convergence_flag"] = convergence > CONVERGENCE_FLAG_FACTOR * cfg.convergence_tol
        if diagnostics["convergence_flag"]:
            log_with_fields(
                logger, "warning", "Geometric phase not converged at requested tolerance",
                event="convergence_flag", convergence=convergence,
                convergence_tol=cfg.convergence_tol, steps=cfg.steps,
            )

    record = ResultRecord(
        inputs=cfg.echo(),
        gamma=result.gamma,
        alpha=result.alpha,
        visibility=result.visibility,
        gamma_closed_form=closed_form,
        gamma_first_order=first_order,
        diagnostics=diagnostics,
    )
    log_with_fields(
        logger, "info", "Scenario finished",
        event="scenario_finished", scenario=cfg.scenario, gamma=result.gamma, steps=cfg.steps,
    )
    return record


def _sweep_point(cfg: ScenarioConfig, param: str, value: Any, estimate_convergence: bool) -> ResultRecord:
    try:
        point = cfg.with_overrides(**{param: value})
        record = run_scenario(point, estimate_convergence)
        record.inputs[param] = value
        return record
    except (MixphaseError, ValidationError, FileNotFoundError) as e:
        log_with_fields(
            logger, "warning", "Sweep point failed",
            event="sweep_point_failed", param=param, value=value, error=type(e).__name__,
        )
        inputs = cfg.echo()
        inputs[param] = value
        return ResultRecord(inputs=inputs, error=payload_for(e)["error"])


def sweep(
    cfg: ScenarioConfig,
    param: str,
    values: Iterable[Any],
    workers: Optional[int] = None,
    estimate_convergence: bool = True,
) -> List[ResultRecord]:
    """Run one scenario per value of ``param``, concurrently, in input order.

    Failed points are recorded in-row and the sweep continues.

    Raises:
        ConfigError: If ``param`` is not sweepable
    """
    if param not in SWEEPABLE:
        raise ConfigError(
            f"Parameter '{param}' cannot be swept",
            {"param": param, "sweepable": list(SWEEPABLE)},
        )
    values = list(values)
    if not values:
        return []
    max_workers = workers or cfg.workers
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(lambda value: _sweep_point(cfg, param, value, estimate_convergence), values))


def fringe(cfg: ScenarioConfig, chi_points: int) -> FringeData:
    """Interference profile 1 + ν cos(χ − α) on χ ∈ [0, 2π).

    An undefined α yields the flat profile with ν reported as 0.

    Raises:
        ConfigError: If chi_points < 4
    """
    if chi_points < MIN_CHI_POINTS:
        raise ConfigError("chi_points must be at least 4", {"chi_points": chi_points})
    spectral, _ = decompose_path(build_state_path(cfg), gap_tol=cfg.gap_tol)
    chi = np.linspace(0.0, 2.0 * math.pi, chi_points, endpoint=False)
    profile = interference_profile(spectral, chi, cfg.phase_tol)
    nu = visibility(spectral)
    endpoint = complex(np.sum(spectral.weights() * spectral.endpoint_overlaps()))
    alpha = wrap_phase(np.angle(endpoint)) if nu >= cfg.phase_tol else None
    return FringeData(profile[:, 0], profile[:, 1], alpha, nu if alpha is not None else 0.0)


def _integrator_error(cfg: ScenarioConfig, path: StatePath) -> Optional[float]:
    if cfg.scenario != "dephasing" or cfg.theta0 > math.pi / 2:
        return None
    params = DephasingQubitParams(cfg.eta, cfg.lam, cfg.theta0, cfg.duration)
    exact = dephasing_density_matrix(params, path.tau)
    return float(np.max(np.abs(path.states[-1] - exact)))


def converge(cfg: ScenarioConfig, levels: int = 4) -> List[Dict[str, Any]]:
    """Grid refinement table starting at cfg.steps and doubling ``levels − 1`` times.

    Each row holds steps, γ, |Δγ| to the previous level, the ratio of
    successive differences, the error against the closed form when one
    exists and, for dephasing, the integrator error of ρ(τ) and its ratio.

    Raises:
        ConfigError: If levels < 2 or the scenario has a fixed grid
    """
    if levels < 2:
        raise ConfigError("converge needs at least two levels", {"levels": levels})
    if cfg.scenario == "imported-path":
        raise ConfigError("imported paths have a fixed grid and cannot be refined")

    closed_form, _ = _oracles(cfg)
    rows: List[Dict[str, Any]] = []
    for level in range(levels):
        steps = cfg.steps * 2 ** level
        path = build_state_path(cfg, steps)
        result, _, _ = phase_of_path(path, cfg)
        row = {
            "steps": steps,
            "gamma": result.gamma,
            "delta": None,
            "ratio": None,
            "error": phase_distance(result.gamma, closed_form) if closed_form is not None else None,
            "integrator_error": _integrator_error(cfg, path),
            "integrator_ratio": None,
        }
        if rows:
            previous = rows[-1]
            row["delta"] = phase_distance(result.gamma, previous["gamma"])
            if previous["delta"] and row["delta"]:
                row["ratio"] = previous["delta"] / row["delta"]
            if previous["integrator_error"] and row["integrator_error"]:
                row["integrator_ratio"] = previous["integrator_error"] / row["integrator_error"]
        rows.append(row)
    return rows


def export_schedule(cfg: ScenarioConfig, target, transported: bool = False) -> Path:
    """Write U_sa(t_j) for the scenario's path as a matrix-sequence file.

    Args:
        cfg: Scenario configuration
        target: Output file path
        transported: Use the parallel-transported V∥ in place of V
    """
    spectral, _ = decompose_path(build_state_path(cfg), gap_tol=cfg.gap_tol)
    connecting = build_connecting_unitary(spectral)
    if transported:
        _, connecting = parallel_transport_correction(connecting, spectral.initial_frame)
    schedule = build_Usa(connecting, build_W_path(spectral, cfg.designated))
    written = write_matrix_sequence(target, schedule.times, schedule.matrices)
    log_with_fields(
        logger, "info", "Schedule exported",
        event="schedule_exported", path=str(written), samples=schedule.n_samples,
    )
    return written


SWEEP_COLUMNS = ("gamma", "alpha", "visibility", "gamma_closed_form", "gamma_first_order")


def write_records(records: List[ResultRecord], stream: TextIO, fmt: str = "json", key: Optional[str] = None) -> None:
    """Emit records as JSON lines or as a CSV table keyed by ``key``."""
    if fmt == "json":
        for record in records:
            stream.write(json.dumps(record.to_dict()) + "\n")
        return

    writer = csv.writer(stream, lineterminator="\n")
    leading = [key] if key else []
    writer.writerow(leading + list(SWEEP_COLUMNS) + ["convergence", "error"])
    for record in records:
        row = [record.inputs.get(key)] if key else []
        row += [getattr(record, column) for column in SWEEP_COLUMNS]
        row.append(record.diagnostics.get("convergence"))
        row.append(record.error["code"] if record.error else "")
        writer.writerow(["" if value is None else value for value in row])


def write_fringe(data: FringeData, stream: TextIO) -> None:
    """CSV fringe table with an α/ν metadata header."""
    stream.write(f"# alpha={'undefined' if data.alpha is None else repr(data.alpha)}\n")
    stream.write(f"# nu={data.nu!r}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["chi", "intensity"])
    for chi, intensity in data.rows():
        writer.writerow([repr(chi), repr(intensity)])


def write_table(rows: List[Dict[str, Any]], stream: TextIO, fmt: str = "json") -> None:
    """Emit refinement-study rows as JSON lines or CSV."""
    if fmt == "json":
        for row in rows:
            stream.write(json.dumps(row) + "\n")
        return
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
