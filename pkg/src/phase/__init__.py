# mixphase phase functionals
"""Geometric phase, relative phase, visibility, fringes, gauge and holonomy."""

from .models import PhaseResult, GaugeTransform
from .functional import (
    DEFAULT_PHASE_TOL,
    wrap_phase,
    phase_distance,
    transport_angles,
    branch_terms,
    geometric_phase,
    relative_phase,
    visibility,
    fringe_intensity,
    interference_profile,
    apply_gauge,
)
from .holonomy import wilson_line, block_transport_operator, geometric_phase_degenerate

__all__ = [
    "PhaseResult", "GaugeTransform", "DEFAULT_PHASE_TOL",
    "wrap_phase", "phase_distance", "transport_angles", "branch_terms",
    "geometric_phase", "relative_phase", "visibility", "fringe_intensity",
    "interference_profile", "apply_gauge",
    "wilson_line", "block_transport_operator", "geometric_phase_degenerate",
]
