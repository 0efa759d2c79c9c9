"""Fixed-step fourth-order integration of the Lindblad master equation.

The generator

    ρ̇ = −i[H, ρ] + Σ_m (Γ_m ρ Γ_m† − ½{Γ_m†Γ_m, ρ})

is linear in ρ, so one classical RK4 step is the fixed matrix
T = I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24 acting on the row-major
vectorisation of ρ. The propagator is assembled once per grid and then
applied step by step.
"""

import logging

import numpy as np

from ..numkernel.errors import ContractError, DimensionError, IntegrationAccuracyError, PositivityError
from ..numkernel.linalg import hermiticity_error, hermitize
from ..spectral.models import StatePath
from ..utils.decorators import timed
from ..utils.logging_config import log_with_fields
from .models import LindbladModel, TimeGrid

logger = logging.getLogger("mixphase.lindblad")

TRACE_DRIFT_TOL = 1e-8
POSITIVITY_TOL = 1e-8
INITIAL_STATE_TOL = 1e-10


def liouvillian(model: LindbladModel) -> np.ndarray:
    """Superoperator L with vec(ρ̇) = L·vec(ρ) for row-major vec."""
    dim = model.dim
    identity = np.eye(dim)
    hamiltonian = model.hamiltonian
    generator = -1j * (np.kron(hamiltonian, identity) - np.kron(identity, hamiltonian.T))
    for jump in model.jump_operators:
        decay = jump.conj().T @ jump
        generator += np.kron(jump, jump.conj())
        generator -= 0.5 * (np.kron(decay, identity) + np.kron(identity, decay.T))
    return generator


def rk4_propagator(generator: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of y' = L·y as a matrix."""
    scaled = dt * np.asarray(generator, dtype=complex)
    identity = np.eye(scaled.shape[0])
    # Horner form of I + A + A²/2 + A³/6 + A⁴/24
    propagator = identity + scaled / 4.0
    propagator = identity + scaled @ propagator / 3.0
    propagator = identity + scaled @ propagator / 2.0
    return identity + scaled @ propagator


def _check_initial_state(model: LindbladModel, rho0: np.ndarray) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (model.dim, model.dim):
        raise DimensionError(
            "Initial state dimension does not match the model",
            {"state_shape": list(rho0.shape), "dim": model.dim},
        )
    if hermiticity_error(rho0) > INITIAL_STATE_TOL:
        raise ContractError("Initial state is not Hermitian")
    trace = float(np.real(np.trace(rho0)))
    if abs(trace - 1.0) > INITIAL_STATE_TOL:
        raise ContractError("Initial state does not have unit trace", {"trace": trace})
    lowest = float(np.min(np.linalg.eigvalsh(hermitize(rho0))))
    if lowest < -INITIAL_STATE_TOL:
        raise ContractError("Initial state is not positive semidefinite", {"min_eigenvalue": lowest})
    return hermitize(rho0)


@timed("integration_timed", logger_name="mixphase.lindblad")
def integrate(model: LindbladModel, rho0: np.ndarray, grid: TimeGrid) -> StatePath:
    """Integrate the master equation on a uniform grid.

    Args:
        model: Hamiltonian and jump operators
        rho0: Initial density operator
        grid: Uniform time grid on [0, τ]

    Returns:
        StatePath with one re-Hermitised sample per grid point

    Raises:
        ContractError: If rho0 is not a density operator of the model's dimension
        IntegrationAccuracyError: If the trace drifts by more than 1e-8
        PositivityError: If a sample develops an eigenvalue below −1e-8
    """
    rho0 = _check_initial_state(model, rho0)
    dim = model.dim
    propagator = rk4_propagator(liouvillian(model), grid.dt)

    states = np.empty((grid.steps + 1, dim, dim), dtype=complex)
    states[0] = rho0
    current = rho0.reshape(-1)
    for step in range(1, grid.steps + 1):
        current = propagator @ current
        sample = hermitize(current.reshape(dim, dim))
        drift = abs(float(np.real(np.trace(sample))) - 1.0)
        if drift > TRACE_DRIFT_TOL:
            raise IntegrationAccuracyError(
                "Trace drift exceeds tolerance; increase the number of steps",
                {"step": step, "trace_drift": drift, "steps": grid.steps},
            )
        states[step] = sample
        current = sample.reshape(-1)

    eigenvalues = np.linalg.eigvalsh(states)
    lowest = float(np.min(eigenvalues))
    if lowest < -POSITIVITY_TOL:
        step = int(np.argmin(np.min(eigenvalues, axis=1)))
        raise PositivityError(
            "Integrated state lost positivity; increase the number of steps",
            {"step": step, "min_eigenvalue": lowest},
        )

    traces = np.real(np.trace(states, axis1=1, axis2=2))
    log_with_fields(
        logger, "debug", "Integration finished",
        event="integration_finished",
        steps=grid.steps,
        dim=dim,
        trace_drift=float(np.max(np.abs(traces - 1.0))),
        min_eigenvalue=lowest,
    )
    return StatePath(grid.times(), states)
