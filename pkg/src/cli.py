"""Command-line interface for mixphase.

Subcommands: compute, sweep, fringe, converge, export-schedule. Results go
to stdout (or --out); logs and error payloads go to stderr.

Exit codes: 0 success, 2 configuration error, 3 numerical contract error,
1 unexpected failure.
"""

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from .config import Config
from .scenarios.errors import EXIT_SUCCESS, EXIT_UNEXPECTED, ConfigError, exit_code_for, payload_for
from .scenarios.runner import (
    converge,
    export_schedule,
    fringe,
    run_scenario,
    sweep,
    write_fringe,
    write_records,
    write_table,
)
from .scenarios.validators import SWEEPABLE, VALID_SCENARIOS, ScenarioConfig, load_document
from .utils.logging_config import setup_logging

logger = logging.getLogger("mixphase.cli")

# CLI dest -> ScenarioConfig field
FLAG_FIELDS = {
    "eta": "eta",
    "lam": "lam",
    "theta0": "theta0",
    "tau": "tau",
    "steps": "steps",
    "weight": "weight",
    "gap_tol": "gap_tol",
    "phase_tol": "phase_tol",
    "convergence_tol": "convergence_tol",
    "path_file": "path_file",
    "out": "out",
    "format": "format",
    "workers": "workers",
}


def _scenario_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--scenario", choices=VALID_SCENARIOS, help="Scenario name")
    parent.add_argument("--config", type=Path, help="Scenario YAML file; flags override its values")
    parent.add_argument("--theta0", type=float, help="Initial polar angle (radians)")
    parent.add_argument("--eta", type=float, help="Precession rate")
    parent.add_argument("--lambda", dest="lam", type=float, help="Dephasing strength")
    parent.add_argument("--lambda-ratio", dest="lambda_ratio", type=float, help="Dephasing strength as a multiple of eta")
    parent.add_argument("--tau", type=float, help="Duration (default 2*pi/eta)")
    parent.add_argument("--steps", type=int, help="Uniform grid steps")
    parent.add_argument("--weight", type=float, help="Dominant branch weight for unitary-precession")
    parent.add_argument("--path-file", dest="path_file", help="Matrix-sequence file for imported-path")
    parent.add_argument("--gap-tol", dest="gap_tol", type=float, help="Degeneracy gap tolerance")
    parent.add_argument("--phase-tol", dest="phase_tol", type=float, help="Undefined-phase threshold")
    parent.add_argument("--convergence-tol", dest="convergence_tol", type=float, help="Requested accuracy of gamma")
    parent.add_argument("--out", help="Output file (stdout when omitted)")
    parent.add_argument("--format", choices=("json", "csv"), help="Output format")
    parent.add_argument("--workers", type=int, help="Concurrent sweep workers")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(prog="mixphase", description="Geometric phases of mixed-state paths")
    parser.add_argument("--settings", type=Path, help="Runtime settings YAML (default config/settings.yaml)")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    commands = parser.add_subparsers(dest="command", required=True)
    flags = _scenario_flags()

    commands.add_parser("compute", parents=[flags], help="Run a single scenario")

    sweep_parser = commands.add_parser("sweep", parents=[flags], help="Sweep one scalar parameter")
    sweep_parser.add_argument("--param", required=True, choices=SWEEPABLE, help="Parameter to sweep")
    sweep_parser.add_argument("--values", default="", help="Comma-separated parameter values")
    sweep_parser.add_argument("--no-convergence", dest="convergence", action="store_false",
                              help="Skip the refined-grid convergence estimate")

    fringe_parser = commands.add_parser("fringe", parents=[flags], help="Emit the interference profile")
    fringe_parser.add_argument("--chi-points", dest="chi_points", type=int, default=64)

    converge_parser = commands.add_parser("converge", parents=[flags], help="Grid refinement study")
    converge_parser.add_argument("--levels", type=int, default=4)

    export_parser = commands.add_parser("export-schedule", parents=[flags], help="Write the U_sa schedule")
    export_parser.add_argument("--transported", action="store_true", help="Use the parallel-transported V")
    return parser


def load_scenario(args: argparse.Namespace, settings: Config) -> ScenarioConfig:
    """Merge defaults < settings numerics < scenario file < CLI flags and validate.

    Raises:
        ConfigError: If no scenario is named
        pydantic.ValidationError: If a field is invalid
    """
    document: Dict[str, Any] = load_document(args.config) if args.config else {}
    if args.scenario:
        document["scenario"] = args.scenario
    if "scenario" not in document:
        raise ConfigError("A scenario is required: pass --scenario or --config")

    data = settings.numerics.scenario_defaults(document["scenario"])
    data["format"] = settings.run.format
    data["workers"] = settings.run.workers
    data.update(document)
    for dest, name in FLAG_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[name] = value
    if getattr(args, "lambda_ratio", None) is not None:
        data["lam"] = args.lambda_ratio * float(data.get("eta", 1.0))
    if "lambda" in data and "lam" in data:
        data.pop("lambda")
    return ScenarioConfig.model_validate(data)


def _parse_values(raw: str, param: str) -> List[Any]:
    tokens = [token.strip() for token in raw.split(",") if token.strip()]
    try:
        if param == "steps":
            return [int(token) for token in tokens]
        return [float(token) for token in tokens]
    except ValueError:
        raise ConfigError("--values must be comma-separated numbers", {"values": raw})


@contextlib.contextmanager
def _output(target: Optional[str]):
    if target is None:
        yield sys.stdout
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        yield f


def _dispatch(args: argparse.Namespace, cfg: ScenarioConfig, stream_target: Optional[str]) -> None:
    if args.command == "compute":
        record = run_scenario(cfg)
        with _output(stream_target) as stream:
            write_records([record], stream, cfg.format)
    elif args.command == "sweep":
        values = _parse_values(args.values, args.param)
        records = sweep(cfg, args.param, values, cfg.workers, args.convergence)
        with _output(stream_target) as stream:
            write_records(records, stream, cfg.format, key=args.param)
    elif args.command == "fringe":
        data = fringe(cfg, args.chi_points)
        with _output(stream_target) as stream:
            write_fringe(data, stream)
    elif args.command == "converge":
        rows = converge(cfg, args.levels)
        with _output(stream_target) as stream:
            write_table(rows, stream, cfg.format)
    elif args.command == "export-schedule":
        if stream_target is None:
            raise ConfigError("export-schedule requires --out")
        written = export_schedule(cfg, stream_target, args.transported)
        sys.stdout.write(json.dumps({"success": True, "path": str(written)}) + "\n")


def main(argv: Optional[List[str]] = None, stderr: Optional[TextIO] = None) -> int:
    """Run the CLI and return the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    errors = stderr or sys.stderr

    try:
        settings = Config.from_yaml(str(args.settings) if args.settings else None)
        handler = logging.FileHandler(settings.logging.file) if settings.logging.file else None
        setup_logging(args.log_level or settings.logging.level, handler)
        problems = settings.validate()
        if problems:
            raise ConfigError("Invalid runtime settings", {"errors": problems})
        cfg = load_scenario(args, settings)
        _dispatch(args, cfg, cfg.out)
    except Exception as e:
        code = exit_code_for(e)
        if code == EXIT_UNEXPECTED:
            logger.error("Unexpected failure", exc_info=True)
        errors.write(json.dumps(payload_for(e)) + "\n")
        return code
    return EXIT_SUCCESS


if __name__ == "__main__":
    raise SystemExit(main())
