"""Precessing qubit under pure dephasing: model, analytic solution and phase oracles.

The model is H = (η/2)σ_z with a single jump operator Γ = √(Λ/2)σ_z, so the
Bloch vector precesses about z at rate η while its transverse part decays as
e^{−Λt}. Starting from the pure state with polar angle θ₀ the polar angle of
the eigenvector obeys tan θ_t = e^{−Λt} tan θ₀.
"""

import math
from typing import Union

import numpy as np

from ..numkernel.errors import ContractError, DomainError, UndefinedPhaseError
from ..phase.functional import DEFAULT_PHASE_TOL, wrap_phase
from ..spectral.models import NULL_BRANCH_TOL, SpectralPath
from .models import DephasingQubitParams, LindbladModel, TimeGrid

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

QUASI_CYCLIC_TOL = 1e-12


def dephasing_model(eta: float, lam: float) -> LindbladModel:
    """H = (η/2)σ_z, Γ = √(Λ/2)σ_z."""
    if lam < 0.0:
        raise ContractError("Dephasing strength must be non-negative", {"lam": lam})
    jumps = (math.sqrt(lam / 2.0) * PAULI_Z,) if lam > 0.0 else ()
    return LindbladModel(0.5 * eta * PAULI_Z, jumps)


def bloch_state(theta: float, phi: float = 0.0, radius: float = 1.0) -> np.ndarray:
    """½(I + r·σ) for the Bloch vector of length ``radius`` at angles (θ, φ)."""
    if not 0.0 <= radius <= 1.0:
        raise ContractError("Bloch radius must lie in [0, 1]", {"radius": radius})
    x = radius * math.sin(theta) * math.cos(phi)
    y = radius * math.sin(theta) * math.sin(phi)
    z = radius * math.cos(theta)
    return 0.5 * (IDENTITY_2 + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z); accepts a single state or a stack."""
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.stack([
        np.trace(rho @ PAULI_X, axis1=-2, axis2=-1),
        np.trace(rho @ PAULI_Y, axis1=-2, axis2=-1),
        np.trace(rho @ PAULI_Z, axis1=-2, axis2=-1),
    ], axis=-1))


def polar_angle(params: DephasingQubitParams, t) -> np.ndarray:
    """θ_t with tan θ_t = e^{−Λt} tan θ₀."""
    t = np.asarray(t, dtype=float)
    return np.arctan2(np.exp(-params.lam * t) * math.sin(params.theta0), math.cos(params.theta0))


def dephasing_density_matrix(params: DephasingQubitParams, t: Union[float, np.ndarray]) -> np.ndarray:
    """Exact ρ_dp(t); shape (2, 2) for scalar t, (T, 2, 2) for an array."""
    t = np.asarray(t, dtype=float)
    transverse = np.exp(-params.lam * t) * math.sin(params.theta0)
    x = transverse * np.cos(params.eta * t)
    y = transverse * np.sin(params.eta * t)
    z = np.full_like(t, math.cos(params.theta0))
    return 0.5 * (
        IDENTITY_2
        + x[..., None, None] * PAULI_X
        + y[..., None, None] * PAULI_Y
        + z[..., None, None] * PAULI_Z
    )


def dephasing_qubit_analytic(params: DephasingQubitParams, grid: TimeGrid) -> SpectralPath:
    """Exact branch-tracked eigen-data of the dephasing path.

    Branch 0 carries ω₁ = ½(1 + √(cos²θ₀ + e^{−2Λt} sin²θ₀)) ≥ ½ with
    |φ₁(t)⟩ = e^{−iηt/2}cos(θ_t/2)|0⟩ + e^{iηt/2}sin(θ_t/2)|1⟩.
    """
    times = grid.times()
    c, s = math.cos(params.theta0), math.sin(params.theta0)
    radius = np.sqrt(c * c + np.exp(-2.0 * params.lam * times) * s * s)
    large = 0.5 * (1.0 + radius)
    values = np.column_stack([large, 1.0 - large])

    half = 0.5 * polar_angle(params, times)
    lower = np.exp(-0.5j * params.eta * times)
    upper = np.exp(0.5j * params.eta * times)
    vectors = np.empty((times.size, 2, 2), dtype=complex)
    vectors[:, 0, 0] = lower * np.cos(half)
    vectors[:, 1, 0] = upper * np.sin(half)
    vectors[:, 0, 1] = -lower * np.sin(half)
    vectors[:, 1, 1] = upper * np.cos(half)

    null_branches = tuple(int(k) for k in np.flatnonzero(np.all(values < NULL_BRANCH_TOL, axis=0)))
    return SpectralPath(times, values, vectors, null_branches)


def _require_quasi_cyclic(params: DephasingQubitParams) -> None:
    period = 2.0 * math.pi / params.eta
    if abs(params.tau - period) > QUASI_CYCLIC_TOL * period:
        raise ContractError(
            "Closed-form phase holds for tau = 2*pi/eta only",
            {"tau": params.tau, "period": period},
        )


def dephasing_phase_closed_form(params: DephasingQubitParams) -> float:
    """Geometric phase of the quasi-cyclic dephasing path.

    With c = cos θ₀, s = sin θ₀, x = 4πΛ/η and R = √(c² + s²e^{−x}),

        γ = −π + (η/4Λ)·ln[(1−c)(R+c) / ((1+c)(R−c))]
          = (η/2Λ)·ln[(R+c)/(1+c)]

    evaluated through expm1/log1p so small Λ keeps full precision. Λ = 0
    returns the unitary limit −π(1−c); θ₀ = 0 gives 0. Result is on the
    principal branch.

    Raises:
        ContractError: If tau differs from one precession period
        DomainError: If cos θ₀ < 0
    """
    _require_quasi_cyclic(params)
    c, s = math.cos(params.theta0), math.sin(params.theta0)
    if c < -QUASI_CYCLIC_TOL:
        raise DomainError("Closed form requires cos(theta0) >= 0", {"theta0": params.theta0})
    c = max(c, 0.0)
    if params.lam == 0.0:
        return wrap_phase(-math.pi * (1.0 - c))

    x = 4.0 * math.pi * params.lam / params.eta
    radius = math.sqrt(c * c + s * s * math.exp(-x))
    # R − 1 = s²(e^{−x} − 1)/(R + 1)
    shift = s * s * math.expm1(-x) / ((radius + 1.0) * (1.0 + c))
    return wrap_phase(params.eta / (2.0 * params.lam) * math.log1p(shift))


def dephasing_phase_first_order(params: DephasingQubitParams) -> float:
    """γ ≈ −π(1 − cos θ₀) + π² cos θ₀ sin²θ₀ (Λ/η), on the principal branch."""
    c, s = math.cos(params.theta0), math.sin(params.theta0)
    return wrap_phase(-math.pi * (1.0 - c) + math.pi ** 2 * c * s * s * params.ratio)


def unitary_precession_phase(
    eta: float,
    theta0: float,
    tau: float,
    weight: float = 1.0,
    phase_tol: float = DEFAULT_PHASE_TOL,
) -> float:
    """Geometric phase of ρ₀ = p|ψ(θ₀)⟩⟨ψ(θ₀)| + (1−p)|ψ⊥⟩⟨ψ⊥| under H = (η/2)σ_z.

    Each branch picks up γ_k = arg[(cos(ητ/2) ∓ i cos θ₀ sin(ητ/2)) e^{±iητcos θ₀/2}]
    with the same overlap magnitude, so γ = arg(p e^{iγ₁} + (1−p) e^{iγ₂}).

    Args:
        eta: Precession rate
        theta0: Polar angle of the dominant branch
        tau: Duration
        weight: p, the weight of |ψ(θ₀)⟩
        phase_tol: Magnitude below which the phase is undefined

    Raises:
        ContractError: If p is outside [0, 1]
        UndefinedPhaseError: If the branch contributions cancel
    """
    if not 0.0 <= weight <= 1.0:
        raise ContractError("Branch weight must lie in [0, 1]", {"weight": weight})
    c = math.cos(theta0)
    half = 0.5 * eta * tau
    first = complex(math.cos(half), -c * math.sin(half)) * np.exp(1j * half * c)
    second = complex(math.cos(half), c * math.sin(half)) * np.exp(-1j * half * c)
    if abs(first) < phase_tol:
        raise UndefinedPhaseError("Branch overlap vanishes; phase is undefined", {"tau": tau})
    total = weight * first + (1.0 - weight) * second
    if abs(total) < phase_tol:
        raise UndefinedPhaseError("Branch contributions cancel; phase is undefined")
    return wrap_phase(np.angle(total))
