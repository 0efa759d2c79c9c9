"""Shared fixtures for mixphase tests."""

import math

import numpy as np
import pytest
from pathlib import Path

# Add repo root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.lindblad.models import DephasingQubitParams, TimeGrid
from src.spectral.models import StatePath


def rotation_path(values_fn, angle_rate: float, tau: float, samples: int) -> StatePath:
    """ρ(t) = R(t) diag(ω_a, ω_b) R(t)† with R(t) = exp(−i σ_y · angle_rate · t)."""
    times = np.linspace(0.0, tau, samples)
    states = []
    for t in times:
        angle = angle_rate * t
        rotation = np.array([
            [math.cos(angle), -math.sin(angle)],
            [math.sin(angle), math.cos(angle)],
        ], dtype=complex)
        states.append(rotation @ np.diag(values_fn(t)) @ rotation.conj().T)
    return StatePath(times, np.array(states))


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(7)


@pytest.fixture
def dephasing_params():
    """θ₀ = π/3, Λ/η = 0.1, one precession period."""
    return DephasingQubitParams(eta=1.0, lam=0.1, theta0=math.pi / 3)


@pytest.fixture
def coarse_grid(dephasing_params):
    """Uniform grid with 400 steps over one period."""
    return TimeGrid(dephasing_params.tau, 400)
