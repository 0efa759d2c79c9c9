"""Scenario registry, configuration, runs and result emission."""

from .demo import degenerate_demo_path, demo_block_operator
from .errors import ERROR_CODES, ConfigError, error_payload, exit_code_for, payload_for
from .matrix_io import read_matrix_sequence, read_state_path, write_matrix_sequence, write_state_path
from .runner import (
    FringeData,
    ResultRecord,
    build_state_path,
    converge,
    export_schedule,
    fringe,
    phase_of_path,
    run_scenario,
    sweep,
    write_fringe,
    write_records,
    write_table,
)
from .validators import SWEEPABLE, VALID_SCENARIOS, ScenarioConfig

__all__ = [
    "ScenarioConfig",
    "VALID_SCENARIOS",
    "SWEEPABLE",
    "ResultRecord",
    "FringeData",
    "ConfigError",
    "ERROR_CODES",
    "error_payload",
    "payload_for",
    "exit_code_for",
    "read_matrix_sequence",
    "write_matrix_sequence",
    "read_state_path",
    "write_state_path",
    "degenerate_demo_path",
    "demo_block_operator",
    "build_state_path",
    "phase_of_path",
    "run_scenario",
    "sweep",
    "fringe",
    "converge",
    "export_schedule",
    "write_records",
    "write_fringe",
    "write_table",
]
