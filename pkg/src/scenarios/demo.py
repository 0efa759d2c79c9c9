"""Built-in four-level path with a two-fold degenerate eigenvalue block.

ρ(t) = U(t) D(t) U(t)† with U(t) = exp(−iG₂t) exp(−iG₁t) and
D = diag(ω_a, ω_a, ω_b, ω_c), s = t/τ:

    ω_a = 0.2 + 0.05 s,  ω_b = 0.45 − 0.05 s,  ω_c = 0.15 − 0.05 s.

The degenerate block spans the first two columns of U(t). Its transport
obeys Ẋ = iB(t)X with B the upper-left 2×2 block of e^{iG₁t}G₂e^{−iG₁t} + G₁,
which the reference solution integrates with midpoint matrix exponentials.
"""

import numpy as np

from ..numkernel.linalg import dagger, eigh_hermitian, matrix_exp
from ..spectral.models import StatePath

DEMO_TAU = 1.0
DEMO_BLOCK_COLUMNS = (0, 1)
ORACLE_STEPS = 8000

GENERATOR_1 = np.array([
    [0.0, 0.6, 0.3, 0.0],
    [0.6, 0.2, 0.0, 0.4],
    [0.3, 0.0, -0.1, 0.5],
    [0.0, 0.4, 0.5, 0.3],
], dtype=complex)

GENERATOR_2 = np.array([
    [0.5, 0.2j, 0.0, 0.3],
    [-0.2j, -0.4, 0.25, 0.0],
    [0.0, 0.25, 0.1, 0.35j],
    [0.3, 0.0, -0.35j, -0.2],
], dtype=complex)


def _evolution(generator: np.ndarray, times: np.ndarray, sign: float) -> np.ndarray:
    """exp(sign·i·G·t) for every t, through one eigendecomposition of G."""
    values, vectors = eigh_hermitian(generator)
    phases = np.exp(sign * 1j * np.outer(times, values))
    return np.einsum("ik,tk,jk->tij", vectors, phases, np.conj(vectors))


def demo_unitary(times) -> np.ndarray:
    """U(t) = exp(−iG₂t) exp(−iG₁t), shape (T, 4, 4)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    return _evolution(GENERATOR_2, times, -1.0) @ _evolution(GENERATOR_1, times, -1.0)


def demo_eigenvalues(times, tau: float = DEMO_TAU) -> np.ndarray:
    """(ω_a, ω_a, ω_b, ω_c) per sample, shape (T, 4)."""
    s = np.atleast_1d(np.asarray(times, dtype=float)) / tau
    omega_a = 0.2 + 0.05 * s
    return np.column_stack([omega_a, omega_a, 0.45 - 0.05 * s, 0.15 - 0.05 * s])


def degenerate_demo_path(steps: int, tau: float = DEMO_TAU) -> StatePath:
    """Sampled ρ(t_j) on a uniform grid with ``steps`` intervals."""
    times = np.linspace(0.0, tau, steps + 1)
    frames = demo_unitary(times)
    states = np.einsum("tik,tk,tjk->tij", frames, demo_eigenvalues(times, tau), np.conj(frames))
    return StatePath(times, 0.5 * (states + dagger(states)))


def _block_connection(t: float) -> np.ndarray:
    rotation = _evolution(GENERATOR_1, np.array([t]), 1.0)[0]
    full = rotation @ GENERATOR_2 @ dagger(rotation) + GENERATOR_1
    block = list(DEMO_BLOCK_COLUMNS)
    return full[np.ix_(block, block)]


def demo_block_transport(steps: int = ORACLE_STEPS, tau: float = DEMO_TAU) -> np.ndarray:
    """Reference transport matrix X(τ) from midpoint exponentials of iB(t)."""
    dt = tau / steps
    transport = np.eye(len(DEMO_BLOCK_COLUMNS), dtype=complex)
    for step in range(steps):
        midpoint = (step + 0.5) * dt
        transport = matrix_exp(1j * dt * _block_connection(midpoint)) @ transport
    return transport


def demo_block_operator(steps: int = ORACLE_STEPS, tau: float = DEMO_TAU) -> np.ndarray:
    """Reference lab-frame block operator U_b(τ)·X(τ)·U_b(0)†."""
    start, end = demo_unitary(np.array([0.0, tau]))
    block = list(DEMO_BLOCK_COLUMNS)
    return end[:, block] @ demo_block_transport(steps, tau) @ dagger(start[:, block])
