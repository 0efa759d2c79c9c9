"""Geometric phase of paths with degenerate eigenvalue blocks.

Within a block the abelian overlap phases are replaced by a Wilson line:
each step overlap matrix M_j = Φ_b(t_j)†Φ_b(t_{j+1}) is projected to its
unitary polar factor U_j, and the parallel-transported frame is
Φ_b(t_j)·X_j with X_{j+1} = U_j† X_j, X_0 = I. Steps outside the block's
degenerate sub-interval use the per-branch (diagonal) unitarisation, and a
degenerate run strictly inside the path is bridged by matching its entry and
exit frames directly.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..numkernel.errors import ContractError
from ..numkernel.linalg import dagger, polar_unitary
from ..spectral.decompose import interior_runs, min_spectral_gap
from ..spectral.models import DegeneracyStructure, SpectralPath
from ..utils.logging_config import log_with_fields
from .functional import DEFAULT_PHASE_TOL, branch_terms, checked_arg, wrap_phase
from .models import PhaseResult

logger = logging.getLogger("mixphase.phase")


def _diagonal_unitaries(overlaps: np.ndarray) -> np.ndarray:
    """Per-branch unitarisation: the phases of the diagonal overlaps."""
    diagonal = np.diagonal(overlaps, axis1=-2, axis2=-1)
    magnitude = np.abs(diagonal)
    phases = np.where(magnitude > 0, diagonal / np.where(magnitude > 0, magnitude, 1.0), 1.0)
    unitaries = np.zeros_like(overlaps)
    n = overlaps.shape[-1]
    unitaries[..., np.arange(n), np.arange(n)] = phases
    return unitaries


def _step_unitaries(
    spectral: SpectralPath,
    indices: Sequence[int],
    flags: Optional[np.ndarray],
) -> Tuple[np.ndarray, np.ndarray]:
    """Step unitaries U_j and a mask of steps bridged across an interior degenerate run.

    An interior run of flagged samples [first, last] is crossed in one step from
    t_{first-1} to t_{last+1}, matched per branch; the steps inside it are the identity.
    Runs touching either end of the path use the full polar factor.
    """
    block = spectral.vectors[:, :, list(indices)]
    overlaps = dagger(block[:-1]) @ block[1:]
    bridged = np.zeros(overlaps.shape[0], dtype=bool)
    if flags is None:
        return polar_unitary(overlaps), bridged

    flags = np.asarray(flags, dtype=bool)
    coupled = flags[:-1] | flags[1:]
    unitaries = _diagonal_unitaries(overlaps)
    runs = interior_runs(flags)
    for first, last in runs:
        coupled[first - 1:last + 1] = False
        bridged[first - 1:last + 1] = True
    if np.any(coupled):
        unitaries[coupled] = polar_unitary(overlaps[coupled])
    identity = np.eye(len(indices), dtype=complex)
    for first, last in runs:
        unitaries[first - 1] = _diagonal_unitaries(dagger(block[first - 1]) @ block[last + 1])
        unitaries[first:last + 1] = identity
    return unitaries, bridged


def _transport(
    spectral: SpectralPath,
    indices: Sequence[int],
    flags: Optional[np.ndarray],
) -> Tuple[np.ndarray, float]:
    """Final transport matrix X_n and the block transport residual."""
    n = len(indices)
    if spectral.n_samples < 2:
        return np.eye(n, dtype=complex), 0.0

    unitaries, bridged = _step_unitaries(spectral, indices, flags)
    block = spectral.vectors[:, :, list(indices)]
    dt = np.diff(spectral.times)
    identity = np.eye(n)

    current = np.eye(n, dtype=complex)
    residual = 0.0
    for step, unitary in enumerate(unitaries):
        following = dagger(unitary) @ current
        # F_j†F_{j+1} for the transported frame F_j = Φ_b(t_j) X_j
        link = dagger(current) @ dagger(block[step]) @ block[step + 1] @ following
        if not bridged[step]:
            residual = max(residual, float(np.max(np.abs(link - identity))) / dt[step])
        current = following
    return current, residual


def wilson_line(
    spectral: SpectralPath,
    indices: Sequence[int],
    flags: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Block transport matrix X = (U_0 U_1 ⋯ U_{n−1})† in initial-frame coordinates.

    Args:
        spectral: Branch-tracked spectral path
        indices: Branch indices of the block
        flags: Per-sample degeneracy flags of the block; None couples every step

    Raises:
        SingularityError: If an overlap block is ill-conditioned
    """
    transport, _ = _transport(spectral, indices, flags)
    return transport


def block_transport_operator(
    spectral: SpectralPath,
    indices: Sequence[int],
    flags: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Gauge-invariant lab-frame operator Φ_b(τ)·X·Φ_b(0)†."""
    transport = wilson_line(spectral, indices, flags)
    start = spectral.vectors[0][:, list(indices)]
    end = spectral.vectors[-1][:, list(indices)]
    return end @ transport @ dagger(start)


def geometric_phase_degenerate(
    spectral: SpectralPath,
    blocks: DegeneracyStructure,
    phase_tol: float = DEFAULT_PHASE_TOL,
) -> PhaseResult:
    """Geometric phase for paths with degenerate eigenvalue blocks.

    Singleton blocks contribute exactly the abelian branch terms, so a
    structure of singletons reproduces geometric_phase.

    Args:
        spectral: Branch-tracked spectral path
        blocks: Degeneracy structure covering the path's branches
        phase_tol: Magnitude below which the phase is undefined

    Returns:
        PhaseResult with per-branch terms and block diagnostics

    Raises:
        ContractError: If the structure does not match the path
        SingularityError: If an overlap block is ill-conditioned
        UndefinedPhaseError: If the total vanishes
    """
    if blocks.dim != spectral.dim:
        raise ContractError(
            "Degeneracy structure does not match path dimension",
            {"structure_dim": blocks.dim, "path_dim": spectral.dim},
        )
    if blocks.sample_flags.size != spectral.n_samples:
        raise ContractError("Degeneracy flags do not match the path grid")

    terms = branch_terms(spectral)
    weights = spectral.weights()
    endpoint = np.einsum("ik,ik->k", np.conj(spectral.vectors[0]), spectral.vectors[-1])
    residuals = {}

    for index, block in enumerate(blocks.blocks):
        if len(block) == 1:
            continue
        members = list(block)
        transport, residual = _transport(spectral, members, blocks.flags_for(index))
        overlap = dagger(spectral.vectors[0][:, members]) @ spectral.vectors[-1][:, members]
        terms[members] = weights[members] * np.diagonal(overlap @ transport)
        residuals[",".join(str(k) for k in members)] = residual

    gamma = checked_arg(complex(np.sum(terms)), phase_tol)
    endpoint_sum = complex(np.sum(weights * endpoint))
    alpha = wrap_phase(np.angle(endpoint_sum)) if abs(endpoint_sum) >= phase_tol else None

    log_with_fields(
        logger, "debug", "Degenerate geometric phase computed",
        event="phase_computed", gamma=gamma, blocks=blocks.multiplicities,
    )
    return PhaseResult(
        gamma=gamma,
        alpha=alpha,
        visibility=float(abs(endpoint_sum)),
        branch_terms=terms,
        diagnostics={
            "min_gap": min_spectral_gap(spectral),
            "block_transport_residual": residuals,
            "blocks": [list(block) for block in blocks.blocks],
            "grid_size": spectral.n_samples,
        },
    )
