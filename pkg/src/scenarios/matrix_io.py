"""Plain-text matrix-sequence files.

Layout::

    N <dim> T <samples>
    t <value>
    <re>,<im> <re>,<im> ...      (N lines of N entries)
    t <value>
    ...

Floats are written with ``repr`` so a write/read cycle is exact. Writes are
atomic (temp file in the target directory, then rename).
"""

import os
import tempfile
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..numkernel.errors import DimensionError
from ..spectral.models import StatePath
from .errors import ConfigError

PathLike = Union[str, Path]


def _format_entry(value: complex) -> str:
    return f"{float(value.real)!r},{float(value.imag)!r}"


def write_matrix_sequence(path: PathLike, times: np.ndarray, matrices: np.ndarray) -> Path:
    """Write samples (t_j, M_j) to ``path`` atomically.

    Raises:
        DimensionError: If shapes are inconsistent
    """
    times = np.asarray(times, dtype=float)
    matrices = np.asarray(matrices, dtype=complex)
    if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2] or matrices.shape[0] != times.size:
        raise DimensionError(
            "Matrix sequence must have shape (T, N, N) matching the times",
            {"times": int(times.size), "matrices": list(matrices.shape)},
        )

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"N {matrices.shape[1]} T {times.size}"]
    for t, matrix in zip(times, matrices):
        lines.append(f"t {float(t)!r}")
        lines.extend(" ".join(_format_entry(entry) for entry in row) for row in matrix)

    fd, tmp_path = tempfile.mkstemp(dir=target.parent, suffix='.tmp')
    try:
        with os.fdopen(fd, 'w') as f:
            f.write("\n".join(lines) + "\n")
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_path, str(target))
    except Exception:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return target


def _parse_entry(token: str, line_number: int) -> complex:
    try:
        real, imag = token.split(",")
        return complex(float(real), float(imag))
    except ValueError:
        raise ConfigError(
            f"Malformed matrix entry on line {line_number}",
            {"line": line_number, "entry": token},
        )


def read_matrix_sequence(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """Read a matrix-sequence file into (times, matrices).

    Raises:
        FileNotFoundError: If the file does not exist
        ConfigError: If the file does not follow the layout
    """
    with open(path, 'r') as f:
        lines = [line.strip() for line in f if line.strip()]
    if not lines:
        raise ConfigError("Matrix file is empty", {"path": str(path)})

    header = lines[0].split()
    try:
        if len(header) != 4 or header[0] != "N" or header[2] != "T":
            raise ValueError(lines[0])
        dim, n_samples = int(header[1]), int(header[3])
    except ValueError:
        raise ConfigError("Matrix file header must read 'N <dim> T <samples>'", {"header": lines[0]})
    if dim < 1 or n_samples < 1:
        raise ConfigError("Matrix file header has non-positive sizes", {"header": lines[0]})

    expected = 1 + n_samples * (dim + 1)
    if len(lines) != expected:
        raise ConfigError(
            "Matrix file length does not match its header",
            {"expected_lines": expected, "found_lines": len(lines)},
        )

    times = np.empty(n_samples)
    matrices = np.empty((n_samples, dim, dim), dtype=complex)
    cursor = 1
    for sample in range(n_samples):
        marker = lines[cursor].split()
        if len(marker) != 2 or marker[0] != "t":
            raise ConfigError(f"Expected 't <value>' on line {cursor + 1}", {"line": cursor + 1})
        try:
            times[sample] = float(marker[1])
        except ValueError:
            raise ConfigError(f"Malformed time on line {cursor + 1}", {"line": cursor + 1})
        for row in range(dim):
            line_number = cursor + row + 2
            tokens = lines[cursor + row + 1].split()
            if len(tokens) != dim:
                raise ConfigError(
                    f"Expected {dim} entries on line {line_number}",
                    {"line": line_number, "found": len(tokens)},
                )
            matrices[sample, row] = [_parse_entry(token, line_number) for token in tokens]
        cursor += dim + 1
    return times, matrices


def write_state_path(path: PathLike, states: StatePath) -> Path:
    """Export a StatePath in matrix-sequence format."""
    return write_matrix_sequence(path, states.times, states.states)


def read_state_path(path: PathLike) -> StatePath:
    """Import a StatePath; sample validity is checked by StatePath itself."""
    times, matrices = read_matrix_sequence(path)
    return StatePath(times, matrices)
