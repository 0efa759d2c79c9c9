"""Lindblad path generation and the dephasing-qubit oracles."""

from .dephasing import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    bloch_state,
    bloch_vector,
    dephasing_density_matrix,
    dephasing_model,
    dephasing_phase_closed_form,
    dephasing_phase_first_order,
    dephasing_qubit_analytic,
    polar_angle,
    unitary_precession_phase,
)
from .integrator import integrate, liouvillian, rk4_propagator
from .models import DephasingQubitParams, LindbladModel, TimeGrid

__all__ = [
    "LindbladModel",
    "DephasingQubitParams",
    "TimeGrid",
    "liouvillian",
    "rk4_propagator",
    "integrate",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "dephasing_model",
    "bloch_state",
    "bloch_vector",
    "polar_angle",
    "dephasing_density_matrix",
    "dephasing_qubit_analytic",
    "dephasing_phase_closed_form",
    "dephasing_phase_first_order",
    "unitary_precession_phase",
]
