"""Tests for Lindblad integration and the dephasing-qubit oracles."""

import math

import numpy as np
import pytest
from pathlib import Path

# Add repo root to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.lindblad.dephasing import (
    PAULI_X,
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
from src.lindblad.integrator import integrate, liouvillian, rk4_propagator
from src.lindblad.models import DephasingQubitParams, LindbladModel, TimeGrid
from src.numkernel.errors import (
    ContractError,
    DimensionError,
    DomainError,
    IntegrationAccuracyError,
    PositivityError,
    UndefinedPhaseError,
)
from src.phase.functional import geometric_phase, phase_distance
from src.spectral.decompose import decompose_path

LOWERING = np.array([[0, 1], [0, 0]], dtype=complex)


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestModels:
    """Test model and parameter validation."""

    def test_non_hermitian_hamiltonian(self):
        """Test a non-Hermitian Hamiltonian is rejected."""
        with pytest.raises(ContractError):
            LindbladModel(LOWERING)

    def test_jump_dimension_mismatch(self):
        """Test jump operators must match the Hamiltonian."""
        with pytest.raises(DimensionError):
            LindbladModel(PAULI_Z, (np.eye(3),))

    def test_from_rates(self):
        """Test rates scale jump operators by their square root."""
        model = LindbladModel.from_rates(PAULI_Z, [LOWERING], [0.25])

        np.testing.assert_allclose(model.jump_operators[0], 0.5 * LOWERING)
        assert model.dim == 2

    def test_from_rates_mismatch(self):
        """Test rates and operators must pair up."""
        with pytest.raises(ContractError):
            LindbladModel.from_rates(PAULI_Z, [LOWERING], [0.1, 0.2])

    def test_from_rates_negative(self):
        """Test negative rates are rejected."""
        with pytest.raises(ContractError):
            LindbladModel.from_rates(PAULI_Z, [LOWERING], [-0.1])

    def test_params_default_tau(self):
        """Test τ defaults to one precession period."""
        params = DephasingQubitParams(eta=2.0, lam=0.1, theta0=0.5)

        assert params.tau == pytest.approx(math.pi)
        assert params.ratio == pytest.approx(0.05)

    def test_params_domain(self):
        """Test θ₀ beyond π/2 is outside the closed-form domain."""
        with pytest.raises(DomainError):
            DephasingQubitParams(eta=1.0, lam=0.1, theta0=2.0)

    @pytest.mark.parametrize("eta,lam,tau", [(0.0, 0.1, None), (1.0, -0.1, None), (1.0, 0.1, -1.0)])
    def test_params_contract(self, eta, lam, tau):
        """Test invalid rates and durations are contract errors."""
        with pytest.raises(ContractError):
            DephasingQubitParams(eta=eta, lam=lam, theta0=0.5, tau=tau)

    def test_time_grid(self):
        """Test uniform grid spacing."""
        grid = TimeGrid(2.0, 4)

        np.testing.assert_allclose(grid.times(), [0.0, 0.5, 1.0, 1.5, 2.0])
        assert grid.dt == 0.5

    def test_time_grid_minimum_steps(self):
        """Test grids need at least two steps."""
        with pytest.raises(ContractError):
            TimeGrid(1.0, 1)


class TestLiouvillian:
    """Test the row-major superoperator."""

    def test_trace_preserving(self):
        """Test vec(I)ᵀ L = 0."""
        model = LindbladModel.from_rates(0.3 * PAULI_X + 0.5 * PAULI_Z, [LOWERING, PAULI_Z], [0.2, 0.05])

        generator = liouvillian(model)

        np.testing.assert_allclose(np.eye(2).reshape(-1) @ generator, 0.0, atol=1e-14)

    def test_matches_master_equation(self, rng):
        """Test L·vec(ρ) = vec(−i[H, ρ] + Σ ΓρΓ† − ½{Γ†Γ, ρ})."""
        hamiltonian = 0.3 * PAULI_X + 0.5 * PAULI_Z
        jump = 0.4 * LOWERING
        model = LindbladModel(hamiltonian, (jump,))
        rho = random_density(rng, 2)

        decay = jump.conj().T @ jump
        expected = (
            -1j * (hamiltonian @ rho - rho @ hamiltonian)
            + jump @ rho @ jump.conj().T
            - 0.5 * (decay @ rho + rho @ decay)
        )

        np.testing.assert_allclose(liouvillian(model) @ rho.reshape(-1), expected.reshape(-1), atol=1e-14)

    def test_rk4_propagator_scalar(self):
        """Test the one-step propagator is the degree-four Taylor polynomial."""
        z = -0.3 + 0.2j

        step = rk4_propagator(np.array([[z]]), 0.5)

        h = 0.5 * z
        assert step[0, 0] == pytest.approx(1 + h + h ** 2 / 2 + h ** 3 / 6 + h ** 4 / 24, abs=1e-15)


class TestIntegrate:
    """Test fixed-step RK4 integration."""

    def test_matches_analytic_dephasing(self, dephasing_params):
        """Test the integrated path agrees with the exact dephasing solution."""
        grid = TimeGrid(dephasing_params.tau, 2000)

        path = integrate(
            dephasing_model(dephasing_params.eta, dephasing_params.lam),
            bloch_state(dephasing_params.theta0),
            grid,
        )

        exact = dephasing_density_matrix(dephasing_params, grid.times())
        assert np.max(np.abs(path.states - exact)) < 1e-10
        assert path.trace_drift() < 1e-12

    def test_unitary_keeps_purity(self):
        """Test Λ = 0 evolution keeps a pure state pure."""
        path = integrate(dephasing_model(1.0, 0.0), bloch_state(0.7), TimeGrid(2 * math.pi, 1000))

        np.testing.assert_allclose(path.purity(), 1.0, atol=1e-10)

    def test_dephasing_purity_decreases(self, dephasing_params):
        """Test purity is non-increasing under dephasing."""
        path = integrate(
            dephasing_model(dephasing_params.eta, dephasing_params.lam),
            bloch_state(dephasing_params.theta0),
            TimeGrid(dephasing_params.tau, 500),
        )

        assert np.all(np.diff(path.purity()) <= 1e-14)

    def test_trace_drift_detected(self):
        """Test a wildly unstable step size trips the trace-drift check."""
        model = LindbladModel.from_rates(np.zeros((2, 2)), [LOWERING], [100.0])

        with pytest.raises(IntegrationAccuracyError) as exc_info:
            integrate(model, np.diag([0.0, 1.0]), TimeGrid(10.0, 2))

        assert exc_info.value.code == "TRACE_DRIFT"

    def test_positivity_loss_detected(self):
        """Test amplified coherences trip the positivity check."""
        with pytest.raises(PositivityError) as exc_info:
            integrate(dephasing_model(1.0, 100.0), bloch_state(math.pi / 2), TimeGrid(1.0, 2))

        assert exc_info.value.details["min_eigenvalue"] < 0.0

    def test_initial_state_dimension(self):
        """Test ρ₀ must match the model dimension."""
        with pytest.raises(DimensionError):
            integrate(dephasing_model(1.0, 0.1), np.eye(3) / 3, TimeGrid(1.0, 4))

    def test_initial_state_trace(self):
        """Test ρ₀ must have unit trace."""
        with pytest.raises(ContractError):
            integrate(dephasing_model(1.0, 0.1), np.eye(2), TimeGrid(1.0, 4))


class TestDephasingAnalytic:
    """Test the exact dephasing solution."""

    def test_bloch_round_trip(self):
        """Test bloch_vector inverts bloch_state."""
        rho = bloch_state(0.4, 1.1, 0.8)

        expected = 0.8 * np.array([math.sin(0.4) * math.cos(1.1), math.sin(0.4) * math.sin(1.1), math.cos(0.4)])
        np.testing.assert_allclose(bloch_vector(rho), expected, atol=1e-14)

    def test_bloch_radius_checked(self):
        """Test Bloch radius above one is rejected."""
        with pytest.raises(ContractError):
            bloch_state(0.3, radius=1.5)

    def test_polar_angle(self, dephasing_params):
        """Test tan θ_t = e^{−Λt} tan θ₀."""
        t = np.array([0.0, 1.0, 4.0])

        angles = polar_angle(dephasing_params, t)

        assert angles[0] == pytest.approx(dephasing_params.theta0)
        np.testing.assert_allclose(
            np.tan(angles),
            np.exp(-dephasing_params.lam * t) * math.tan(dephasing_params.theta0),
            rtol=1e-12,
        )

    def test_spectral_reconstructs_state(self, dephasing_params, coarse_grid):
        """Test the analytic eigen-data rebuild ρ_dp(t)."""
        spectral = dephasing_qubit_analytic(dephasing_params, coarse_grid)

        exact = dephasing_density_matrix(dephasing_params, coarse_grid.times())
        assert np.max(np.abs(spectral.reconstruct() - exact)) < 1e-13
        assert np.all(spectral.values[:, 0] >= 0.5)

    def test_transverse_decay(self, dephasing_params):
        """Test the transverse Bloch component decays as e^{−Λt}."""
        rho = dephasing_density_matrix(dephasing_params, 3.0)

        x, y, z = bloch_vector(rho)
        assert math.hypot(x, y) == pytest.approx(math.exp(-0.3) * math.sin(dephasing_params.theta0))
        assert z == pytest.approx(math.cos(dephasing_params.theta0))


class TestPhaseOracles:
    """Test closed-form and first-order dephasing phases."""

    def test_unitary_limit(self):
        """Test Λ = 0 returns −π(1 − cos θ₀)."""
        params = DephasingQubitParams(eta=1.0, lam=0.0, theta0=math.pi / 3)

        assert dephasing_phase_closed_form(params) == pytest.approx(-math.pi / 2)

    def test_equator_unitary_limit_is_plus_pi(self):
        """Test θ₀ = π/2, Λ = 0 lands on the branch cut and reports +π."""
        params = DephasingQubitParams(eta=1.0, lam=0.0, theta0=math.pi / 2)

        assert dephasing_phase_closed_form(params) == math.pi

    def test_north_pole(self):
        """Test θ₀ = 0 has no geometric phase."""
        params = DephasingQubitParams(eta=1.0, lam=0.3, theta0=0.0)

        assert dephasing_phase_closed_form(params) == pytest.approx(0.0, abs=1e-15)

    def test_reference_value(self, dephasing_params):
        """Test θ₀ = π/3, Λ/η = 0.1."""
        assert dephasing_phase_closed_form(dephasing_params) == pytest.approx(-1.1965, abs=1e-3)

    @pytest.mark.parametrize("theta0", [math.pi / 6, math.pi / 4, math.pi / 3, 5 * math.pi / 12])
    @pytest.mark.parametrize("ratio", [0.02, 0.1, 0.3])
    def test_matches_reflection_form(self, theta0, ratio):
        """Test agreement with −π + (η/4Λ) ln[(1−c)(R+c)/((1+c)(R−c))]."""
        params = DephasingQubitParams(eta=1.0, lam=ratio, theta0=theta0)
        c, s = math.cos(theta0), math.sin(theta0)
        radius = math.sqrt(c * c + s * s * math.exp(-4 * math.pi * ratio))
        reference = -math.pi + math.log((1 - c) * (radius + c) / ((1 + c) * (radius - c))) / (4 * ratio)

        assert phase_distance(dephasing_phase_closed_form(params), reference) < 1e-10

    def test_small_lambda_is_stable(self):
        """Test tiny Λ approaches the unitary limit without cancellation."""
        params = DephasingQubitParams(eta=1.0, lam=1e-12, theta0=math.pi / 3)

        assert dephasing_phase_closed_form(params) == pytest.approx(-math.pi / 2, abs=1e-10)

    def test_first_order_agreement(self):
        """Test the first-order law matches the closed form to O((Λ/η)²)."""
        params = DephasingQubitParams(eta=1.0, lam=1e-3, theta0=math.pi / 3)

        assert phase_distance(dephasing_phase_first_order(params), dephasing_phase_closed_form(params)) < 1e-4

    def test_requires_quasi_cyclic(self):
        """Test the closed form is refused away from τ = 2π/η."""
        params = DephasingQubitParams(eta=1.0, lam=0.1, theta0=0.5, tau=3.0)

        with pytest.raises(ContractError):
            dephasing_phase_closed_form(params)


class TestUnitaryPrecession:
    """Test the mixed-state unitary precession oracle."""

    def test_pure_state_limit(self):
        """Test p = 1 over one period gives −π(1 − cos θ₀)."""
        gamma = unitary_precession_phase(1.0, math.pi / 4, 2 * math.pi, 1.0)

        assert phase_distance(gamma, -math.pi * (1 - math.cos(math.pi / 4))) < 1e-12

    def test_matches_integrated_path(self):
        """Test the oracle against the numerical pipeline for p = 0.8."""
        theta0, weight = math.pi / 4, 0.8
        path = integrate(
            dephasing_model(1.0, 0.0),
            bloch_state(theta0, radius=2 * weight - 1),
            TimeGrid(2 * math.pi, 20000),
        )
        spectral, structure = decompose_path(path)

        numeric = geometric_phase(spectral, structure).gamma

        assert phase_distance(numeric, unitary_precession_phase(1.0, theta0, 2 * math.pi, weight)) < 1e-6

    def test_vanishing_overlap(self):
        """Test an orthogonal endpoint leaves the phase undefined."""
        with pytest.raises(UndefinedPhaseError):
            unitary_precession_phase(1.0, math.pi / 2, math.pi, 1.0)

    def test_weight_range(self):
        """Test weights outside [0, 1] are rejected."""
        with pytest.raises(ContractError):
            unitary_precession_phase(1.0, 0.5, 1.0, 1.5)
