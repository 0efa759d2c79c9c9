"""Abelian geometric phase, Pancharatnam relative phase, visibility and fringes.

The geometric phase uses the discrete overlap-product rule

    z_k = √(ω_k(0) ω_k(τ)) ⟨φ_k(0)|φ_k(τ)⟩ exp(−i Σ_j arg⟨φ_k(t_j)|φ_k(t_{j+1})⟩)

which is exactly invariant under any per-sample phase change of the
eigenvectors and second-order accurate in the time step.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..numkernel.errors import ContractError, PreconditionError, UndefinedPhaseError
from ..spectral.decompose import DEFAULT_GAP_TOL, detect_degeneracy, min_spectral_gap
from ..spectral.models import DegeneracyStructure, SpectralPath
from ..utils.logging_config import log_with_fields
from .models import GaugeTransform, PhaseResult

logger = logging.getLogger("mixphase.phase")

DEFAULT_PHASE_TOL = 1e-10

# Values this close above −π are ties and are reported as +π.
BRANCH_TIE_TOL = 1e-12

# Branches with ω_k(0)·ω_k(τ) at or below this never trigger the degeneracy precondition.
WEIGHT_PRODUCT_TOL = 1e-14


def wrap_phase(value: float) -> float:
    """Reduce a phase to the principal branch (−π, π]; ties at −π report +π."""
    wrapped = math.remainder(float(value), 2.0 * math.pi)
    if wrapped <= -math.pi + BRANCH_TIE_TOL:
        return math.pi
    return wrapped


def phase_distance(a: float, b: float) -> float:
    """Angular distance |a − b| measured on the circle."""
    return abs(math.remainder(float(a) - float(b), 2.0 * math.pi))


def checked_arg(total: complex, phase_tol: float = DEFAULT_PHASE_TOL) -> float:
    """arg of a weighted overlap sum on the principal branch.

    Raises:
        UndefinedPhaseError: If |total| < phase_tol
    """
    magnitude = abs(total)
    if magnitude < phase_tol:
        raise UndefinedPhaseError(
            "Weighted overlap sum vanishes; phase is undefined",
            {"magnitude": magnitude, "phase_tol": phase_tol},
        )
    return wrap_phase(np.angle(total))


def transport_angles(spectral: SpectralPath) -> np.ndarray:
    """Cumulative Σ_{i<j} arg⟨φ_k(t_i)|φ_k(t_{i+1})⟩ with shape (T, N)."""
    steps = np.angle(spectral.step_overlaps())
    zeros = np.zeros((1, spectral.dim))
    return np.concatenate([zeros, np.cumsum(steps, axis=0)], axis=0)


def branch_terms(spectral: SpectralPath) -> np.ndarray:
    """Per-branch complex contributions z_k of the abelian functional."""
    total_transport = np.sum(np.angle(spectral.step_overlaps()), axis=0)
    return spectral.weights() * spectral.endpoint_overlaps() * np.exp(-1j * total_transport)


def _endpoint_sum(spectral: SpectralPath) -> complex:
    return complex(np.sum(spectral.weights() * spectral.endpoint_overlaps()))


def branch_transport_residuals(spectral: SpectralPath) -> np.ndarray:
    """max_j |⟨φ_k(t_j)|φ_k(t_{j+1})⟩ − 1| / Δt_j per branch (zeros for one sample)."""
    if spectral.n_samples < 2:
        return np.zeros(spectral.dim)
    dt = np.diff(spectral.times)[:, None]
    return np.max(np.abs(spectral.step_overlaps() - 1.0) / dt, axis=0)


def _check_nondegenerate(spectral: SpectralPath, structure: DegeneracyStructure) -> None:
    products = np.clip(spectral.values[0], 0.0, None) * np.clip(spectral.values[-1], 0.0, None)
    for block in structure.nontrivial_blocks():
        if np.any(products[list(block)] > WEIGHT_PRODUCT_TOL):
            raise PreconditionError(
                f"Branches {list(block)} form a degenerate block; "
                "use geometric_phase_degenerate",
                {"block": list(block)},
            )


def geometric_phase(
    spectral: SpectralPath,
    structure: Optional[DegeneracyStructure] = None,
    phase_tol: float = DEFAULT_PHASE_TOL,
) -> PhaseResult:
    """Geometric phase γ = arg Σ_k z_k of a nondegenerate spectral path.

    Args:
        spectral: Branch-tracked spectral path
        structure: Degeneracy structure (detected with the default gap
            tolerance when omitted)
        phase_tol: Magnitude below which the phase is undefined

    Returns:
        PhaseResult with γ, α, ν, z_k and diagnostics

    Raises:
        PreconditionError: If a weighted branch belongs to a degenerate block
        UndefinedPhaseError: If |Σ_k z_k| < phase_tol
    """
    if structure is None:
        structure = detect_degeneracy(spectral.values, DEFAULT_GAP_TOL)
    _check_nondegenerate(spectral, structure)

    terms = branch_terms(spectral)
    gamma = checked_arg(complex(np.sum(terms)), phase_tol)
    endpoint = _endpoint_sum(spectral)
    alpha = wrap_phase(np.angle(endpoint)) if abs(endpoint) >= phase_tol else None

    result = PhaseResult(
        gamma=gamma,
        alpha=alpha,
        visibility=float(abs(endpoint)),
        branch_terms=terms,
        diagnostics={
            "min_gap": min_spectral_gap(spectral),
            "transport_residual": branch_transport_residuals(spectral).tolist(),
            "grid_size": spectral.n_samples,
        },
    )
    log_with_fields(
        logger, "debug", "Geometric phase computed",
        event="phase_computed", gamma=gamma, visibility=result.visibility,
    )
    return result


def relative_phase(spectral: SpectralPath, phase_tol: float = DEFAULT_PHASE_TOL) -> float:
    """Pancharatnam relative phase α = arg Σ_k √(ω_k(0)ω_k(τ)) ⟨φ_k(0)|φ_k(τ)⟩.

    Raises:
        UndefinedPhaseError: If the weighted sum vanishes
    """
    return checked_arg(_endpoint_sum(spectral), phase_tol)


def visibility(spectral: SpectralPath) -> float:
    """Fringe visibility ν = |Σ_k √(ω_k(0)ω_k(τ)) ⟨φ_k(0)|φ_k(τ)⟩|."""
    return float(abs(_endpoint_sum(spectral)))


def fringe_intensity(chi: np.ndarray, nu: float, alpha: Optional[float]) -> np.ndarray:
    """1 + ν cos(χ − α); flat when α is undefined."""
    chi = np.asarray(chi, dtype=float)
    if alpha is None:
        return np.ones_like(chi)
    return 1.0 + nu * np.cos(chi - alpha)


def interference_profile(
    spectral: SpectralPath,
    chi_grid,
    phase_tol: float = DEFAULT_PHASE_TOL,
) -> np.ndarray:
    """Normalised fringe profile rows (χ, 1 + ν cos(χ − α)), shape (M, 2)."""
    chi = np.asarray(chi_grid, dtype=float)
    endpoint = _endpoint_sum(spectral)
    nu = float(abs(endpoint))
    alpha = wrap_phase(np.angle(endpoint)) if nu >= phase_tol else None
    return np.column_stack([chi, fringe_intensity(chi, nu, alpha)])


def apply_gauge(spectral: SpectralPath, gauge: GaugeTransform) -> SpectralPath:
    """Multiply each |φ_k(t_j)⟩ by e^{iθ_k(t_j)}.

    Raises:
        ContractError: If the gauge grid does not align with the path grid
    """
    if gauge.theta.shape != (spectral.n_samples, spectral.dim):
        raise ContractError(
            "Gauge grid does not match the path grid",
            {"gauge_shape": list(gauge.theta.shape), "path_shape": [spectral.n_samples, spectral.dim]},
        )
    if gauge.times is not None and not np.allclose(gauge.times, spectral.times, rtol=0.0, atol=1e-12):
        raise ContractError("Gauge sample times do not match the path times")
    return spectral.with_vectors(spectral.vectors * gauge.phases()[:, None, :])
