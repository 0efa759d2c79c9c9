"""Data models for sampled density-operator paths and their spectral data."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..numkernel.errors import ContractError, DimensionError
from ..numkernel.linalg import dagger, hermiticity_error, unitarity_error

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-8
NEGATIVITY_TOL = 1e-10
ORTHONORMAL_TOL = 1e-8
NULL_BRANCH_TOL = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _check_times(times: np.ndarray, min_samples: int) -> None:
    if times.ndim != 1 or times.size < min_samples:
        raise ContractError(f"Path needs at least {min_samples} time samples")
    if times[0] != 0.0:
        raise ContractError("Path must start at t = 0", {"t0": float(times[0])})
    if times.size > 1 and np.any(np.diff(times) <= 0.0):
        raise ContractError("Path times must be strictly increasing")


@dataclass(frozen=True)
class StatePath:
    """Time-ordered samples (t_j, ρ_j) of a density-operator path on [0, τ]."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        _check_times(times, 1)
        if states.ndim != 3 or states.shape[1] != states.shape[2]:
            raise DimensionError(f"States must have shape (T, N, N), got {states.shape}")
        if states.shape[0] != times.size:
            raise DimensionError(
                "Number of states does not match number of times",
                {"times": int(times.size), "states": int(states.shape[0])},
            )
        herm = hermiticity_error(states)
        if herm > HERMITIAN_TOL:
            raise ContractError("Path sample is not Hermitian", {"hermiticity_error": herm})
        traces = np.real(np.trace(states, axis1=1, axis2=2))
        drift = float(np.max(np.abs(traces - 1.0)))
        if drift > TRACE_TOL:
            raise ContractError("Path sample does not have unit trace", {"trace_drift": drift})
        lowest = float(np.min(np.linalg.eigvalsh(0.5 * (states + dagger(states)))))
        if lowest < -NEGATIVITY_TOL:
            raise ContractError("Path sample is not positive semidefinite", {"min_eigenvalue": lowest})
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "states", _frozen(states))

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    @property
    def n_samples(self) -> int:
        return int(self.times.size)

    @property
    def tau(self) -> float:
        return float(self.times[-1])

    def trace_drift(self) -> float:
        """Largest |Tr ρ_j − 1| over the samples."""
        traces = np.real(np.trace(self.states, axis1=1, axis2=2))
        return float(np.max(np.abs(traces - 1.0)))

    def purity(self) -> np.ndarray:
        """Tr ρ_j² for every sample."""
        return np.real(np.einsum("tij,tji->t", self.states, self.states))


@dataclass(frozen=True)
class SpectralPath:
    """Branch-tracked eigen-data {t_j, ω_k(t_j), |φ_k(t_j)⟩}.

    Column k of ``vectors[j]`` continues column k of ``vectors[j - 1]``.
    """

    times: np.ndarray
    values: np.ndarray
    vectors: np.ndarray
    null_branches: Tuple[int, ...] = ()

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        vectors = np.asarray(self.vectors, dtype=complex)
        _check_times(times, 1)
        n_samples = times.size
        if values.ndim != 2 or values.shape[0] != n_samples:
            raise DimensionError(f"Eigenvalues must have shape (T, N), got {values.shape}")
        dim = values.shape[1]
        if vectors.shape != (n_samples, dim, dim):
            raise DimensionError(
                f"Eigenvectors must have shape {(n_samples, dim, dim)}, got {vectors.shape}"
            )
        sums = np.sum(values, axis=1)
        if np.max(np.abs(sums - 1.0)) > TRACE_TOL:
            raise ContractError("Eigenvalues do not sum to one at every sample")
        if np.min(values) < -NEGATIVITY_TOL:
            raise ContractError("Negative eigenvalue in spectral path", {"min": float(np.min(values))})
        ortho = unitarity_error(vectors)
        if ortho > ORTHONORMAL_TOL:
            raise ContractError("Eigenvector frames are not orthonormal", {"unitarity_error": ortho})
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "vectors", _frozen(vectors))
        object.__setattr__(self, "null_branches", tuple(int(k) for k in self.null_branches))

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])

    @property
    def n_samples(self) -> int:
        return int(self.times.size)

    @property
    def tau(self) -> float:
        return float(self.times[-1])

    @property
    def initial_frame(self) -> np.ndarray:
        return self.vectors[0]

    def weights(self) -> np.ndarray:
        """Endpoint branch weights √(ω_k(0) ω_k(τ)), negatives clipped to zero."""
        start = np.clip(self.values[0], 0.0, None)
        end = np.clip(self.values[-1], 0.0, None)
        return np.sqrt(start * end)

    def endpoint_overlaps(self) -> np.ndarray:
        """⟨φ_k(0)|φ_k(τ)⟩ for every branch."""
        return np.einsum("ik,ik->k", np.conj(self.vectors[0]), self.vectors[-1])

    def step_overlaps(self) -> np.ndarray:
        """⟨φ_k(t_j)|φ_k(t_{j+1})⟩ with shape (T - 1, N)."""
        return np.einsum("tik,tik->tk", np.conj(self.vectors[:-1]), self.vectors[1:])

    def reconstruct(self) -> np.ndarray:
        """Σ_k ω_k |φ_k⟩⟨φ_k| at every sample, shape (T, N, N)."""
        return np.einsum("tik,tk,tjk->tij", self.vectors, self.values, np.conj(self.vectors))

    def with_vectors(self, vectors: np.ndarray) -> "SpectralPath":
        """Same eigenvalues and grid with replaced eigenvector frames."""
        return SpectralPath(self.times, self.values, vectors, self.null_branches)


@dataclass(frozen=True)
class DegeneracyStructure:
    """Partition of branch indices into degeneracy blocks.

    ``sample_flags[j]`` marks samples where any two branches are within the gap
    tolerance; ``block_flags[b][j]`` marks samples where block ``b`` itself is
    degenerate, which locates a degeneracy restricted to a sub-interval.
    """

    blocks: Tuple[Tuple[int, ...], ...]
    sample_flags: np.ndarray
    block_flags: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(k) for k in block)) for block in self.blocks)
        members = sorted(k for block in blocks for k in block)
        if members != list(range(len(members))):
            raise ContractError("Degeneracy blocks must partition the branch indices")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "sample_flags", _frozen(np.asarray(self.sample_flags, dtype=bool)))
        object.__setattr__(
            self,
            "block_flags",
            {int(b): _frozen(np.asarray(f, dtype=bool)) for b, f in self.block_flags.items()},
        )

    @classmethod
    def singletons(cls, dim: int, n_samples: int) -> "DegeneracyStructure":
        """Structure with every branch in its own block."""
        return cls(tuple((k,) for k in range(dim)), np.zeros(n_samples, dtype=bool))

    @property
    def dim(self) -> int:
        return sum(len(block) for block in self.blocks)

    @property
    def multiplicities(self) -> List[int]:
        return [len(block) for block in self.blocks]

    def nontrivial_blocks(self) -> List[Tuple[int, ...]]:
        return [block for block in self.blocks if len(block) > 1]

    def is_trivial(self) -> bool:
        return all(len(block) == 1 for block in self.blocks)

    def flags_for(self, block_index: int) -> Optional[np.ndarray]:
        """Per-sample degeneracy flags of one block (None for singleton blocks)."""
        return self.block_flags.get(block_index)

    def to_dict(self) -> Dict[str, object]:
        """Convert structure to a JSON-friendly dictionary."""
        return {
            "blocks": [list(block) for block in self.blocks],
            "multiplicities": self.multiplicities,
            "flagged_samples": int(np.count_nonzero(self.sample_flags)),
        }
