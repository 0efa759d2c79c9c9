"""Branch-tracked spectral decomposition of sampled density-operator paths.

Eigenvectors are matched between consecutive samples by overlap magnitude,
so branch identity follows the eigenvectors through eigenvalue crossings
instead of the sorted eigenvalue order.
"""

import logging
from typing import List, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..numkernel.errors import AmbiguityError, ContractError
from ..numkernel.linalg import dagger, eigh_hermitian
from ..utils.logging_config import log_with_fields
from .models import NULL_BRANCH_TOL, DegeneracyStructure, SpectralPath, StatePath

logger = logging.getLogger("mixphase.spectral")

DEFAULT_GAP_TOL = 1e-8
DEFAULT_CONTINUITY_TOL = 0.5
AMBIGUITY_TOL = 1e-6


def _clusters(values: np.ndarray, gap_tol: float) -> np.ndarray:
    """Cluster ids of ascending eigenvalues; neighbours closer than gap_tol share an id."""
    jumps = np.diff(values, axis=-1) >= gap_tol
    zeros = np.zeros(values.shape[:-1] + (1,), dtype=int)
    return np.concatenate([zeros, np.cumsum(jumps, axis=-1)], axis=-1)


def _step_assignments(
    raw_values: np.ndarray,
    raw_vectors: np.ndarray,
    gap_tol: float,
    continuity_tol: float,
) -> np.ndarray:
    """Map raw column a at sample j to raw column σ_j[a] at sample j + 1."""
    overlaps = np.abs(dagger(raw_vectors[:-1]) @ raw_vectors[1:])
    n_steps, dim, _ = overlaps.shape
    clusters = _clusters(raw_values, gap_tol)
    cluster_sizes = np.stack([np.bincount(c, minlength=dim)[c] for c in clusters])
    degenerate_prev = cluster_sizes[:-1] > 1

    order = np.argsort(-overlaps, axis=2)
    best = order[:, :, 0]
    top1 = np.take_along_axis(overlaps, best[:, :, None], axis=2)[:, :, 0]

    if dim > 1:
        second = order[:, :, 1]
        top2 = np.take_along_axis(overlaps, second[:, :, None], axis=2)[:, :, 0]
        next_clusters = clusters[1:]
        split = (
            np.take_along_axis(next_clusters, best, axis=1)
            != np.take_along_axis(next_clusters, second, axis=1)
        )
        ambiguous = (top1 - top2 < AMBIGUITY_TOL) & split & ~degenerate_prev
        if np.any(ambiguous):
            step, branch = (int(i) for i in np.argwhere(ambiguous)[0])
            raise AmbiguityError(
                "Branch assignment is ambiguous; use a finer time grid",
                {"step": step, "raw_branch": branch, "overlap": float(top1[step, branch])},
            )

    broken = (top1 < 1.0 - continuity_tol) & ~degenerate_prev
    if np.any(broken):
        step, branch = (int(i) for i in np.argwhere(broken)[0])
        raise AmbiguityError(
            "Eigenvector continuity lost between samples; use a finer time grid",
            {"step": step, "raw_branch": branch, "overlap": float(top1[step, branch])},
        )

    assignments = best.copy()
    conflicts = np.any(np.sort(best, axis=1) != np.arange(dim), axis=1)
    for step in np.flatnonzero(conflicts):
        _, columns = linear_sum_assignment(-overlaps[step])
        assignments[step] = columns
    return assignments


def interior_runs(flags: np.ndarray) -> List[Tuple[int, int]]:
    """Maximal runs [first, last] of flagged samples that touch neither end of the path."""
    flags = np.asarray(flags, dtype=bool)
    edges = np.diff(np.concatenate([[0], flags.astype(np.int8), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1) - 1
    return [
        (int(first), int(last))
        for first, last in zip(starts, stops)
        if first > 0 and last < flags.size - 1
    ]


def _bridge_assignment(before: np.ndarray, after: np.ndarray) -> np.ndarray:
    """Overlap matching of the frames on either side of a degenerate run."""
    _, columns = linear_sum_assignment(-np.abs(dagger(before) @ after))
    return columns


def detect_degeneracy(values: np.ndarray, gap_tol: float = DEFAULT_GAP_TOL) -> DegeneracyStructure:
    """Merge branches whose tracked eigenvalues come within gap_tol at any sample."""
    n_samples, dim = values.shape
    close = np.abs(values[:, :, None] - values[:, None, :]) < gap_tol
    close[:, np.arange(dim), np.arange(dim)] = False

    parent = list(range(dim))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for k, l in zip(*np.nonzero(np.any(close, axis=0))):
        root_k, root_l = find(int(k)), find(int(l))
        if root_k != root_l:
            parent[max(root_k, root_l)] = min(root_k, root_l)

    groups = {}
    for k in range(dim):
        groups.setdefault(find(k), []).append(k)
    blocks = tuple(tuple(groups[root]) for root in sorted(groups))

    block_flags = {}
    for index, block in enumerate(blocks):
        if len(block) > 1:
            members = np.array(block)
            block_flags[index] = np.any(close[:, members[:, None], members[None, :]], axis=(1, 2))
    return DegeneracyStructure(blocks, np.any(close, axis=(1, 2)), block_flags)


def decompose_path(
    path: StatePath,
    gap_tol: float = DEFAULT_GAP_TOL,
    continuity_tol: float = DEFAULT_CONTINUITY_TOL,
) -> Tuple[SpectralPath, DegeneracyStructure]:
    """Eigendecompose every sample and track branches across the path.

    Branches are seeded at t = 0 in descending eigenvalue order and followed
    by maximum-overlap assignment between consecutive samples.

    Args:
        path: Sampled density-operator path with at least two samples
        gap_tol: Absolute eigenvalue gap below which branches are merged
        continuity_tol: Allowed loss of overlap between consecutive samples

    Returns:
        Tuple of (SpectralPath, DegeneracyStructure)

    Raises:
        ContractError: If the path has fewer than two samples
        AmbiguityError: If branch matching is not unique at some step
    """
    if path.n_samples < 2:
        raise ContractError("decompose_path needs at least two samples")
    if gap_tol <= 0.0:
        raise ContractError("gap_tol must be positive", {"gap_tol": gap_tol})

    raw_values, raw_vectors = eigh_hermitian(path.states)
    assignments = _step_assignments(raw_values, raw_vectors, gap_tol, continuity_tol)

    permutations = np.empty(raw_values.shape, dtype=int)
    permutations[0] = np.argsort(-raw_values[0], kind="stable")
    # Eigenvectors inside a degenerate run are an arbitrary basis of the
    # degenerate subspace, so the exit sample is matched to the entry sample.
    clusters = _clusters(raw_values, gap_tol)
    degenerate = np.any(clusters[:, 1:] == clusters[:, :-1], axis=1)
    bridges = {last + 1: first - 1 for first, last in interior_runs(degenerate)}
    for step, assignment in enumerate(assignments):
        source = bridges.get(step + 1)
        if source is None:
            permutations[step + 1] = assignment[permutations[step]]
        else:
            bridge = _bridge_assignment(raw_vectors[source], raw_vectors[step + 1])
            permutations[step + 1] = bridge[permutations[source]]

    values = np.take_along_axis(raw_values, permutations, axis=1)
    vectors = np.take_along_axis(raw_vectors, permutations[:, None, :], axis=2)
    null_branches = tuple(int(k) for k in np.flatnonzero(np.all(values < NULL_BRANCH_TOL, axis=0)))

    spectral = SpectralPath(path.times, values, vectors, null_branches)
    structure = detect_degeneracy(values, gap_tol)

    log_with_fields(
        logger, "debug", "Path decomposed",
        event="path_decomposed",
        samples=path.n_samples,
        dim=path.dim,
        blocks=structure.multiplicities,
        null_branches=list(null_branches),
    )
    return spectral, structure


def min_spectral_gap(spectral: SpectralPath) -> float:
    """Smallest |ω_k − ω_l| over samples and branch pairs (inf for N = 1)."""
    if spectral.dim < 2:
        return float("inf")
    values = spectral.values
    gaps = np.abs(values[:, :, None] - values[:, None, :])
    upper = np.triu_indices(spectral.dim, k=1)
    return float(np.min(gaps[:, upper[0], upper[1]]))
