"""Connecting unitaries, parallel transport and system+ancilla realisations.

Conventions:
    - V(t_j) = Σ_k |φ_k(t_j)⟩⟨φ_k(0)| maps the initial eigenframe onto the
      current one.
    - Transport phases θ_k(t_j) = −Σ_{i<j} arg⟨φ_k(t_i)|φ_k(t_{i+1})⟩ make
      V∥ = V·Σ_k e^{iθ_k}|φ_k(0)⟩⟨φ_k(0)| satisfy the parallel transport
      condition step by step.
    - Product-space index is m·N + l (system m, ancilla l).
"""

import logging
from typing import Tuple

import numpy as np

from ..numkernel.errors import ContractError, DimensionError
from ..numkernel.linalg import dagger, unitarity_error
from ..phase.models import GaugeTransform
from ..spectral.models import NEGATIVITY_TOL, TRACE_TOL, SpectralPath
from ..utils.logging_config import log_with_fields
from .models import UNITARY_TOL, PurifiedPath, UnitaryPath

logger = logging.getLogger("mixphase.purification")

DEFAULT_DESIGNATED = (0, 0)


def _check_basis(basis: np.ndarray, dim: int) -> np.ndarray:
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (dim, dim):
        raise DimensionError(
            f"Initial frame must have shape {(dim, dim)}, got {basis.shape}"
        )
    error = unitarity_error(basis)
    if error > UNITARY_TOL:
        raise ContractError("Initial frame is not orthonormal", {"unitarity_error": error})
    return basis


def _diagonal_in(basis: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Σ_k phases[j, k] |b_k⟩⟨b_k| for every sample."""
    return np.einsum("ik,tk,jk->tij", basis, phases, np.conj(basis))


def build_connecting_unitary(spectral: SpectralPath) -> UnitaryPath:
    """V(t_j) = Σ_k |φ_k(t_j)⟩⟨φ_k(0)|, so V(0) = I.

    Raises:
        ContractError: If an eigenvector frame is not orthonormal
    """
    error = unitarity_error(spectral.vectors)
    if error > UNITARY_TOL:
        raise ContractError("Eigenvector frames are not orthonormal", {"unitarity_error": error})
    matrices = spectral.vectors @ dagger(spectral.initial_frame)
    # Exact identity at t = 0 rather than Φ0Φ0† up to rounding.
    matrices[0] = np.eye(spectral.dim)
    return UnitaryPath(spectral.times, matrices)


def _transported_angles(v: UnitaryPath, basis: np.ndarray) -> np.ndarray:
    frames = v.matrices @ basis
    overlaps = np.einsum("tik,tik->tk", np.conj(frames[:-1]), frames[1:])
    zeros = np.zeros((1, v.dim))
    return np.concatenate([zeros, -np.cumsum(np.angle(overlaps), axis=0)], axis=0)


def parallel_transport_correction(
    v: UnitaryPath,
    basis: np.ndarray,
) -> Tuple[GaugeTransform, UnitaryPath]:
    """Gauge-fix a connecting unitary so each branch is parallel transported.

    Args:
        v: Connecting unitary path
        basis: Initial eigenframe, columns |φ_k(0)⟩

    Returns:
        Tuple of (transport phases θ, V∥)
    """
    basis = _check_basis(basis, v.dim)
    theta = _transported_angles(v, basis)
    v_par = v.matrices @ _diagonal_in(basis, np.exp(1j * theta))
    return GaugeTransform(theta, v.times), UnitaryPath(v.times, v_par)


def transport_residual(v: UnitaryPath, basis: np.ndarray) -> float:
    """max_{j,k} |⟨φ_k(0)|U_j†(U_{j+1} − U_j)|φ_k(0)⟩| / Δt_j.

    Raises:
        ContractError: If the path has fewer than two samples
    """
    if v.n_samples < 2:
        raise ContractError("transport_residual needs at least two samples")
    basis = _check_basis(basis, v.dim)
    frames = v.matrices @ basis
    increments = frames[1:] - frames[:-1]
    diagonal = np.einsum("tik,tik->tk", np.conj(frames[:-1]), increments)
    dt = np.diff(v.times)[:, None]
    return float(np.max(np.abs(diagonal) / dt))


def compensating_unitary(v: UnitaryPath, basis: np.ndarray) -> UnitaryPath:
    """V_c(t_j) = Σ_k e^{−iθ_k(t_j)} |φ_k(0)⟩⟨φ_k(0)|, with V·V_c† = V∥."""
    basis = _check_basis(basis, v.dim)
    theta = _transported_angles(v, basis)
    return UnitaryPath(v.times, _diagonal_in(basis, np.exp(-1j * theta)))


def _target_columns(values: np.ndarray) -> np.ndarray:
    n_samples, dim = values.shape
    columns = np.zeros((n_samples, dim * dim))
    diagonal = np.arange(dim) * dim + np.arange(dim)
    columns[:, diagonal] = np.sqrt(np.clip(values, 0.0, None))
    return columns


def build_W_path(spectral: SpectralPath, designated: Tuple[int, int] = DEFAULT_DESIGNATED) -> UnitaryPath:
    """Unitaries W(t_j) whose designated column is Σ_k √ω_k(t_j) |φ_k(0)⟩⊗|a_k⟩.

    The completion is S followed by a Householder reflection: S flips the
    designated basis vector e_d, then H maps −e_d onto the target column v.
    Because ⟨e_d|v⟩ ≥ 0 the reflection axis −e_d − v never vanishes, so W
    varies continuously with the eigenvalues.

    The matrices are in the |φ_k(0)⟩⊗|a_l⟩ basis; the returned path carries
    Φ(0)⊗I as its frame.

    Args:
        spectral: Branch-tracked spectral path
        designated: (k₀, l₀) zero-based designated column

    Raises:
        ContractError: If Σ_k ω_k deviates from one or ω is negative
        DimensionError: If the designated index is out of range
    """
    dim = spectral.dim
    k0, l0 = (int(i) for i in designated)
    if not (0 <= k0 < dim and 0 <= l0 < dim):
        raise DimensionError(
            "Designated column is out of range",
            {"designated": [k0, l0], "dim": dim},
        )
    values = spectral.values
    if np.min(values) < -NEGATIVITY_TOL:
        raise ContractError("Negative eigenvalue in spectral path", {"min": float(np.min(values))})
    drift = float(np.max(np.abs(np.sum(values, axis=1) - 1.0)))
    if drift > TRACE_TOL:
        raise ContractError("Target column is not unit norm", {"trace_drift": drift})

    size = dim * dim
    index = k0 * dim + l0
    targets = _target_columns(values)
    targets /= np.linalg.norm(targets, axis=1, keepdims=True)

    flip = np.eye(size)
    flip[index, index] = -1.0
    axis = -targets
    axis[:, index] -= 1.0
    norms = np.einsum("ti,ti->t", axis, axis)
    reflections = np.eye(size) - 2.0 * axis[:, :, None] * axis[:, None, :] / norms[:, None, None]
    matrices = reflections @ flip

    frame = np.kron(spectral.initial_frame, np.eye(dim))
    return UnitaryPath(spectral.times, matrices.astype(complex), frame=frame, anchored=False)


def build_Usa(v: UnitaryPath, w: UnitaryPath) -> UnitaryPath:
    """U_sa(t_j) = (V(t_j) ⊗ I)·W(t_j)·W†(0) in the computational basis.

    Raises:
        DimensionError: If w is not on the N² product space of v
        ContractError: If the sample grids differ
    """
    dim = v.dim
    if w.dim != dim * dim:
        raise DimensionError(
            "W path must act on the system+ancilla space",
            {"system_dim": dim, "w_dim": w.dim},
        )
    if w.n_samples != v.n_samples or not np.allclose(w.times, v.times, rtol=0.0, atol=1e-12):
        raise ContractError("V and W paths are sampled on different grids")

    lab = w.in_lab_basis().matrices
    lifted = np.einsum("tmn,lk->tmlnk", v.matrices, np.eye(dim)).reshape(v.n_samples, dim * dim, dim * dim)
    matrices = lifted @ lab @ dagger(lab[0])
    matrices[0] = np.eye(dim * dim)
    log_with_fields(
        logger, "debug", "System+ancilla unitary assembled",
        event="usa_built", samples=v.n_samples, dim=dim * dim,
    )
    return UnitaryPath(v.times, matrices)


def purify_path(spectral: SpectralPath) -> PurifiedPath:
    """|Ψ(t_j)⟩ = Σ_k √ω_k(t_j) |φ_k(t_j)⟩ ⊗ |a_k⟩ with computational |a_k⟩.

    Raises:
        ContractError: If an eigenvalue is below −1e-10
    """
    lowest = float(np.min(spectral.values))
    if lowest < -NEGATIVITY_TOL:
        raise ContractError("Negative eigenvalue in spectral path", {"min": lowest})
    amplitudes = np.sqrt(np.clip(spectral.values, 0.0, None))
    vectors = (spectral.vectors * amplitudes[:, None, :]).reshape(spectral.n_samples, -1)
    return PurifiedPath(spectral.times, vectors, spectral.dim)


def purified_fringe(purified: PurifiedPath, chi_grid) -> np.ndarray:
    """Fringe rows (χ, ½|e^{iχ}Ψ(0) + Ψ(τ)|²) from the purified endpoints."""
    chi = np.asarray(chi_grid, dtype=float)
    start, end = purified.vectors[0], purified.vectors[-1]
    combined = np.exp(1j * chi)[:, None] * start[None, :] + end[None, :]
    intensity = 0.5 * np.sum(np.abs(combined) ** 2, axis=1)
    return np.column_stack([chi, intensity])

