# mixphase spectral paths
"""Sampled density-operator paths and their branch-tracked spectral data."""

from .models import StatePath, SpectralPath, DegeneracyStructure
from .decompose import decompose_path, detect_degeneracy, min_spectral_gap, DEFAULT_GAP_TOL

__all__ = [
    "StatePath", "SpectralPath", "DegeneracyStructure",
    "decompose_path", "detect_degeneracy", "min_spectral_gap", "DEFAULT_GAP_TOL",
]
