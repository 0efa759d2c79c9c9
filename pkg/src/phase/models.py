"""Data models for geometric-phase results and gauge transformations."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..numkernel.errors import ContractError


@dataclass(frozen=True)
class PhaseResult:
    """Geometric phase γ, relative phase α, visibility ν and per-branch terms z_k.

    ``alpha`` is None when the weighted endpoint overlap vanishes.
    """

    gamma: float
    alpha: Optional[float]
    visibility: float
    branch_terms: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def total(self) -> complex:
        """Σ_k z_k in fixed branch order."""
        return complex(np.sum(self.branch_terms))

    def to_dict(self) -> Dict[str, Any]:
        """Convert PhaseResult to dictionary."""
        return {
            "gamma": self.gamma,
            "alpha": self.alpha,
            "visibility": self.visibility,
            "branch_terms": [[float(z.real), float(z.imag)] for z in self.branch_terms],
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class GaugeTransform:
    """Per-branch phases θ_k(t_j) sampled on a path grid, θ_k(0) = 0."""

    theta: np.ndarray
    times: Optional[np.ndarray] = None

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float, copy=True)
        if theta.ndim != 2 or theta.shape[0] < 1:
            raise ContractError(f"Gauge phases must have shape (T, N), got {theta.shape}")
        if np.any(theta[0] != 0.0):
            raise ContractError("Gauge phases must vanish at t = 0")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        if self.times is not None:
            times = np.array(self.times, dtype=float, copy=True)
            times.setflags(write=False)
            object.__setattr__(self, "times", times)

    @classmethod
    def identity(cls, n_samples: int, dim: int) -> "GaugeTransform":
        """θ ≡ 0."""
        return cls(np.zeros((n_samples, dim)))

    def phases(self) -> np.ndarray:
        """e^{iθ_k(t_j)} with shape (T, N)."""
        return np.exp(1j * self.theta)
