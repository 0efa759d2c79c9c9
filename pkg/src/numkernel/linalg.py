"""Dense complex linear algebra used by every other mixphase module.

All functions are pure: inputs are never modified and outputs are fresh
arrays. Hermitian eigendecompositions accept stacks of shape (..., N, N) so
whole sampled paths can be decomposed in one call.
"""

import numpy as np
import scipy.linalg

from .errors import ContractError, DimensionError, SingularityError

# Relative tolerance for accepting a matrix as Hermitian before exact Hermitization.
HERMITIAN_TOL = 1e-10

# Smallest admissible singular value relative to the largest in polar_unitary.
SINGULAR_TOL = 1e-12


def _require_square(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Coerce to complex array and check trailing dimensions are square."""
    array = np.asarray(matrix, dtype=complex)
    if array.ndim < 2 or array.shape[-1] != array.shape[-2]:
        raise DimensionError(
            f"{name} must be square, got shape {array.shape}",
            {"shape": list(array.shape)},
        )
    if array.shape[-1] < 1:
        raise DimensionError(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(array)):
        raise ContractError(f"{name} contains NaN or Inf entries")
    return array


def dagger(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(matrix, -1, -2))


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """Return the exact Hermitian part (A + A†)/2."""
    array = np.asarray(matrix, dtype=complex)
    return 0.5 * (array + dagger(array))


def hermiticity_error(matrix: np.ndarray) -> float:
    """Largest entrywise deviation from Hermiticity, relative to max(1, ‖A‖_max)."""
    array = np.asarray(matrix, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(array))))
    return float(np.max(np.abs(array - dagger(array)))) / scale


def unitarity_error(matrix: np.ndarray) -> float:
    """Largest entrywise deviation of U†U from the identity (stacks allowed)."""
    array = np.asarray(matrix, dtype=complex)
    identity = np.eye(array.shape[-1])
    return float(np.max(np.abs(dagger(array) @ array - identity)))


def fix_eigenvector_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real nonnegative.

    Ties in magnitude resolve to the lowest row index.
    """
    magnitudes = np.abs(vectors)
    pivot_rows = np.argmax(magnitudes, axis=-2)[..., None, :]
    pivots = np.take_along_axis(vectors, pivot_rows, axis=-2)
    pivot_abs = np.abs(pivots)
    phases = np.where(pivot_abs > 0, np.conj(pivots) / np.where(pivot_abs > 0, pivot_abs, 1.0), 1.0)
    return vectors * phases


def eigh_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix (or stack of them).

    Args:
        matrix: Array of shape (..., N, N), Hermitian within ``tol``
        tol: Relative Hermiticity tolerance

    Returns:
        Tuple (eigenvalues ascending with shape (..., N), eigenvectors as
        orthonormal columns with shape (..., N, N))

    Raises:
        ContractError: If the input is not Hermitian
    """
    array = _require_square(matrix)
    error = hermiticity_error(array)
    if error > tol:
        raise ContractError(
            "eigh_hermitian requires a Hermitian matrix",
            {"hermiticity_error": error},
        )
    values, vectors = np.linalg.eigh(hermitize(array))
    return values, fix_eigenvector_phases(vectors)


def polar_unitary(matrix: np.ndarray) -> np.ndarray:
    """Unitary polar factor U = M (M†M)^{-1/2}, the unitary closest to M.

    Accepts a single matrix or a stack (..., n, n); every matrix in a stack
    must pass the conditioning check.

    Raises:
        SingularityError: If the smallest singular value is below
            SINGULAR_TOL times the largest (ill-conditioned overlap block)
    """
    array = _require_square(matrix)
    left, singular, right_h = np.linalg.svd(array)
    largest = np.max(singular, axis=-1)
    smallest = np.min(singular, axis=-1)
    bad = (largest == 0.0) | (smallest <= SINGULAR_TOL * largest)
    if np.any(bad):
        index = np.argwhere(np.atleast_1d(bad))[0]
        raise SingularityError(
            "Overlap block is numerically singular; refine the time grid",
            {
                "index": [int(i) for i in index],
                "smallest_singular_value": float(np.atleast_1d(smallest)[tuple(index)]),
                "largest_singular_value": float(np.atleast_1d(largest)[tuple(index)]),
            },
        )
    return left @ right_h


def matrix_exp(matrix: np.ndarray) -> np.ndarray:
    """Matrix exponential via scaling and squaring (scipy.linalg.expm)."""
    array = _require_square(matrix)
    return scipy.linalg.expm(array)


def partial_trace_ancilla(rho_sa: np.ndarray, n_system: int, n_ancilla: int) -> np.ndarray:
    """Trace out the ancilla, the second tensor factor of an (N·K)-dim operator.

    (Tr_a ρ)_{mn} = Σ_l ρ[(m,l),(n,l)] with row-major composite index m·K + l.

    Raises:
        DimensionError: If the operator dimension is not n_system · n_ancilla
    """
    array = _require_square(rho_sa, "rho_sa")
    if n_system < 1 or n_ancilla < 1 or array.shape[-1] != n_system * n_ancilla:
        raise DimensionError(
            f"Dimension {array.shape[-1]} does not factor as {n_system} x {n_ancilla}",
            {"dim": array.shape[-1], "n_system": n_system, "n_ancilla": n_ancilla},
        )
    blocks = array.reshape(n_system, n_ancilla, n_system, n_ancilla)
    return np.einsum("mlnl->mn", blocks)
