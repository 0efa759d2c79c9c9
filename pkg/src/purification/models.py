"""Data models for sampled unitary paths and purified state paths."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..numkernel.errors import ContractError, DimensionError
from ..numkernel.linalg import dagger, partial_trace_ancilla, unitarity_error

UNITARY_TOL = 1e-10
ANCHOR_TOL = 1e-12
NORM_TOL = 1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class UnitaryPath:
    """Samples (t_j, U_j) of a unitary family.

    When ``frame`` is set, the matrices are expressed in the basis formed by
    its columns; ``in_lab_basis`` converts them back. ``anchored`` paths
    start at the identity.
    """

    times: np.ndarray
    matrices: np.ndarray
    frame: Optional[np.ndarray] = None
    anchored: bool = True

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        matrices = np.asarray(self.matrices, dtype=complex)
        if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2]:
            raise DimensionError(f"Unitaries must have shape (T, d, d), got {matrices.shape}")
        if matrices.shape[0] != times.size:
            raise DimensionError("Number of unitaries does not match number of times")
        error = unitarity_error(matrices)
        if error > UNITARY_TOL:
            raise ContractError("Unitary path sample is not unitary", {"unitarity_error": error})
        if self.anchored:
            offset = float(np.max(np.abs(matrices[0] - np.eye(matrices.shape[1]))))
            if offset > ANCHOR_TOL:
                raise ContractError("Unitary path must start at the identity", {"offset": offset})
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "matrices", _frozen(matrices))
        if self.frame is not None:
            object.__setattr__(self, "frame", _frozen(np.asarray(self.frame, dtype=complex)))

    @property
    def dim(self) -> int:
        return int(self.matrices.shape[1])

    @property
    def n_samples(self) -> int:
        return int(self.times.size)

    def in_lab_basis(self) -> "UnitaryPath":
        """Same path with matrices expressed in the computational basis."""
        if self.frame is None:
            return self
        lab = self.frame @ self.matrices @ dagger(self.frame)
        return UnitaryPath(self.times, lab, None, self.anchored)

    def max_unitarity_error(self) -> float:
        return unitarity_error(self.matrices)


@dataclass(frozen=True)
class PurifiedPath:
    """Purified vectors |Ψ(t_j)⟩ on system ⊗ ancilla with a fixed ancilla basis.

    Composite index is m·N + l for system index m and ancilla index l; the
    ancilla basis is the computational one.
    """

    times: np.ndarray
    vectors: np.ndarray
    system_dim: int

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape[1] != self.system_dim ** 2:
            raise DimensionError(
                f"Purified vectors must have shape (T, {self.system_dim ** 2}), got {vectors.shape}"
            )
        norms = np.linalg.norm(vectors, axis=1)
        if np.max(np.abs(norms - 1.0)) > NORM_TOL:
            raise ContractError("Purified vector is not normalised")
        object.__setattr__(self, "times", _frozen(np.asarray(self.times, dtype=float)))
        object.__setattr__(self, "vectors", _frozen(vectors))

    @property
    def ancilla_basis(self) -> np.ndarray:
        return np.eye(self.system_dim, dtype=complex)

    def reduced_states(self) -> np.ndarray:
        """Tr_a |Ψ(t_j)⟩⟨Ψ(t_j)| for every sample, shape (T, N, N)."""
        n = self.system_dim
        return np.stack([
            partial_trace_ancilla(np.outer(psi, np.conj(psi)), n, n) for psi in self.vectors
        ])

    def endpoint_overlap(self) -> complex:
        """⟨Ψ(0)|Ψ(τ)⟩."""
        return complex(np.vdot(self.vectors[0], self.vectors[-1]))
