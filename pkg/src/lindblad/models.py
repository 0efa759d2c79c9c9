"""Data models for Lindblad generators, dephasing-qubit parameters and time grids."""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..numkernel.errors import ContractError, DimensionError, DomainError
from ..numkernel.linalg import hermiticity_error

MODEL_HERMITIAN_TOL = 1e-12
THETA_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian H (ħ = 1) and jump operators Γ_m with units of √rate."""

    hamiltonian: np.ndarray
    jump_operators: Tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        hamiltonian = np.array(self.hamiltonian, dtype=complex, copy=True)
        if hamiltonian.ndim != 2 or hamiltonian.shape[0] != hamiltonian.shape[1]:
            raise DimensionError(f"Hamiltonian must be square, got shape {hamiltonian.shape}")
        error = hermiticity_error(hamiltonian)
        if error > MODEL_HERMITIAN_TOL:
            raise ContractError("Hamiltonian is not Hermitian", {"hermiticity_error": error})

        operators = []
        for index, operator in enumerate(self.jump_operators):
            operator = np.array(operator, dtype=complex, copy=True)
            if operator.shape != hamiltonian.shape:
                raise DimensionError(
                    "Jump operator dimension does not match the Hamiltonian",
                    {"operator": index, "shape": list(operator.shape)},
                )
            operator.setflags(write=False)
            operators.append(operator)
        hamiltonian.setflags(write=False)
        object.__setattr__(self, "hamiltonian", hamiltonian)
        object.__setattr__(self, "jump_operators", tuple(operators))

    @classmethod
    def from_rates(
        cls,
        hamiltonian: np.ndarray,
        operators: Sequence[np.ndarray],
        rates: Optional[Sequence[float]] = None,
    ) -> "LindbladModel":
        """Build a model with Γ_m = √(rate_m)·L_m.

        Raises:
            ContractError: If rates and operators differ in number or a rate is negative
        """
        if rates is None:
            return cls(hamiltonian, tuple(operators))
        if len(rates) != len(operators):
            raise ContractError(
                "Number of rates does not match number of jump operators",
                {"rates": len(rates), "operators": len(operators)},
            )
        if any(rate < 0.0 for rate in rates):
            raise ContractError("Dissipation rates must be non-negative")
        scaled = tuple(math.sqrt(rate) * np.asarray(op, dtype=complex) for rate, op in zip(rates, operators))
        return cls(hamiltonian, scaled)

    @property
    def dim(self) -> int:
        return int(self.hamiltonian.shape[0])


@dataclass(frozen=True)
class DephasingQubitParams:
    """Precessing qubit with pure dephasing.

    Attributes:
        eta: Precession rate η > 0
        lam: Dephasing strength Λ ≥ 0
        theta0: Initial polar angle in [0, π/2]
        tau: Duration, defaults to one precession period 2π/η
    """

    eta: float
    lam: float
    theta0: float
    tau: Optional[float] = None

    def __post_init__(self):
        if not self.eta > 0.0:
            raise ContractError("eta must be positive", {"eta": self.eta})
        if not self.lam >= 0.0:
            raise ContractError("lam must be non-negative", {"lam": self.lam})
        if not -THETA_DOMAIN_TOL <= self.theta0 <= math.pi / 2 + THETA_DOMAIN_TOL:
            raise DomainError(
                "theta0 must lie in [0, pi/2] so that cos(theta0) >= 0",
                {"theta0": self.theta0},
            )
        tau = 2.0 * math.pi / self.eta if self.tau is None else float(self.tau)
        if not tau > 0.0:
            raise ContractError("tau must be positive", {"tau": tau})
        object.__setattr__(self, "tau", tau)

    @property
    def ratio(self) -> float:
        """Λ/η."""
        return self.lam / self.eta


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_j = j·τ/steps for j = 0, …, steps."""

    tau: float
    steps: int

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ContractError("tau must be positive", {"tau": self.tau})
        if int(self.steps) != self.steps or self.steps < 2:
            raise ContractError("steps must be an integer >= 2", {"steps": self.steps})
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def dt(self) -> float:
        return self.tau / self.steps

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.tau, self.steps + 1)
