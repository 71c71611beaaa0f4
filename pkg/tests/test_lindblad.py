"""Tests for the Liouvillian builder, steady-state solver, and integrator."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polent.analytic import closed_form, to_density_matrix
from polent.lindblad import (
    DegenerateSteadyStateError,
    IntegrationError,
    build_liouvillian,
    evolve,
    steady_state,
)
from polent.model import DimensionlessParams, LindbladModel, PhysicalParams, build_effective_model, build_full_model
from polent.qops import (
    IDENTITY_2,
    SIGMA_MINUS,
    TWO_QUBITS,
    DensityMatrix,
    HilbertSpace,
    kron,
    trace_distance,
)

ONE_QUBIT = HilbertSpace((2,))


def ground_pair():
    m = np.zeros((4, 4), dtype=complex)
    m[3, 3] = 1.0
    return DensityMatrix(TWO_QUBITS, m)


def random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return m / np.trace(m)


def test_liouvillian_zero_model():
    m = LindbladModel(ONE_QUBIT, np.zeros((2, 2)), ())
    lv = build_liouvillian(m)
    assert lv.matrix.shape == (4, 4)
    assert_allclose(lv.matrix, np.zeros((4, 4)), atol=1e-15)


def test_liouvillian_single_qubit_decay():
    # rho = |e><e| decays at rate 2: L vec(|e><e|) = 2 vec(|g><g| - |e><e|)
    m = LindbladModel(ONE_QUBIT, np.zeros((2, 2)), (np.sqrt(2) * SIGMA_MINUS,))
    lv = build_liouvillian(m).matrix
    vec_ee = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)  # column-stacked
    expected = 2.0 * np.array([-1.0, 0.0, 0.0, 1.0], dtype=complex)
    assert_allclose(lv @ vec_ee, expected, atol=1e-14)


def test_liouvillian_annihilates_trace():
    # Tr(L rho) = 0 for every rho, i.e. vec(I)^T L = 0
    rng = np.random.default_rng(2)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = g + g.conj().T
    j1 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = LindbladModel(TWO_QUBITS, h, (j1,))
    lv = build_liouvillian(m).matrix
    tr_vec = np.eye(4).reshape(-1, order="F")
    assert_allclose(tr_vec @ lv, np.zeros(16), atol=1e-12)


def test_liouvillian_preserves_hermiticity():
    rng = np.random.default_rng(9)
    m = build_effective_model(DimensionlessParams(3.0, 1.5, -0.5))
    lv = build_liouvillian(m).matrix
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        herm = g + g.conj().T
        out = (lv @ herm.reshape(-1, order="F")).reshape(4, 4, order="F")
        assert_allclose(out, out.conj().T, atol=1e-12)


def test_steady_state_pure_decay():
    result = steady_state(build_liouvillian(build_effective_model(DimensionlessParams(0.0, 0.0))))
    expected = np.zeros((4, 4))
    expected[3, 3] = 1.0
    assert_allclose(result.rho.matrix, expected, atol=1e-12)
    assert result.residual <= 1e-9
    assert result.gap > 0


def test_steady_state_full_model_without_drive():
    p = PhysicalParams(j=1.0, delta=10.0, kappa=10.0, gamma=0.01, alpha=0.0, n_max=2)
    result = steady_state(build_liouvillian(build_full_model(p)))
    expected = np.zeros((12, 12))
    expected[3, 3] = 1.0  # |g g 0>
    assert_allclose(result.rho.matrix, expected, atol=1e-10)


def test_steady_state_matches_closed_form():
    rho_a = to_density_matrix(closed_form(10.0, 2.135))
    result = steady_state(build_liouvillian(build_effective_model(DimensionlessParams(10.0, 2.135))))
    assert np.linalg.norm(rho_a.matrix - result.rho.matrix) <= 1e-9


def test_steady_state_qubit_swap_invariance():
    result = steady_state(build_liouvillian(build_effective_model(DimensionlessParams(7.0, 1.2))))
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float)
    m = result.rho.matrix
    assert_allclose(swap @ m @ swap, m, atol=1e-10)


def test_steady_state_degenerate_raises():
    # decay on qubit 1 only leaves qubit 2 free: a whole family of fixed points
    jump = np.sqrt(2) * kron(IDENTITY_2, SIGMA_MINUS)
    m = LindbladModel(TWO_QUBITS, np.zeros((4, 4)), (jump,))
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(build_liouvillian(m))


def test_evolve_constant_under_zero_generator():
    m = LindbladModel(TWO_QUBITS, np.zeros((4, 4)), ())
    rng = np.random.default_rng(4)
    rho0 = DensityMatrix(TWO_QUBITS, random_density(rng, 4))
    out = evolve(m, rho0, t_final=1.0, dt=1e-2)
    assert_allclose(out.matrix, rho0.matrix, atol=1e-14)


def test_evolve_single_qubit_decay_curve():
    # d rho_ee / dt = -2 rho_ee, so rho_ee(t) = exp(-2 t)
    m = LindbladModel(ONE_QUBIT, np.zeros((2, 2)), (np.sqrt(2) * SIGMA_MINUS,))
    rho0 = DensityMatrix(ONE_QUBIT, np.diag([1.0, 0.0]))
    out = evolve(m, rho0, t_final=1.0, dt=1e-3)
    assert_allclose(out.matrix[0, 0].real, np.exp(-2.0), atol=1e-10)


def test_evolve_pair_decay_curve():
    # both qubits decaying: the doubly excited population falls as exp(-4 t)
    m = build_effective_model(DimensionlessParams(0.0, 0.0))
    rho0 = DensityMatrix(TWO_QUBITS, np.diag([1.0, 0.0, 0.0, 0.0]))
    out = evolve(m, rho0, t_final=1.0, dt=1e-3)
    assert_allclose(out.matrix[0, 0].real, np.exp(-4.0), atol=1e-10)


def test_evolve_relaxes_to_steady_state():
    m = build_effective_model(DimensionlessParams(10.0, 2.135))
    target = steady_state(build_liouvillian(m)).rho
    out = evolve(m, ground_pair(), t_final=20.0, dt=1e-3)
    assert trace_distance(out, target) <= 1e-6


def test_evolve_relaxes_from_random_states():
    m = build_effective_model(DimensionlessParams(5.0, 1.0))
    target = steady_state(build_liouvillian(m)).rho
    rng = np.random.default_rng(12)
    for _ in range(10):
        rho0 = DensityMatrix(TWO_QUBITS, random_density(rng, 4))
        out = evolve(m, rho0, t_final=50.0, dt=1e-2)
        assert trace_distance(out, target) <= 1e-6


def test_evolve_reports_drift_to_observer():
    m = build_effective_model(DimensionlessParams(10.0, 2.135))
    drifts = []
    times = []

    def observer(step, t, mat, drift):
        drifts.append(drift)
        times.append(t)

    evolve(m, ground_pair(), t_final=1.0, dt=1e-3, _observer=observer)
    assert len(drifts) == 1000
    assert max(drifts) <= 1e-8
    assert_allclose(times[-1], 1.0, atol=1e-12)


def test_evolve_aborts_on_unstable_step():
    m = build_effective_model(DimensionlessParams(10.0, 2.135))
    with pytest.raises(IntegrationError):
        evolve(m, ground_pair(), t_final=20.0, dt=0.5)


def test_evolve_input_validation():
    m = build_effective_model(DimensionlessParams(1.0, 0.0))
    with pytest.raises(ValueError):
        evolve(m, ground_pair(), t_final=1.0, dt=0.0)
    one_qubit_state = DensityMatrix(ONE_QUBIT, np.diag([1.0, 0.0]))
    with pytest.raises(ValueError):
        evolve(m, one_qubit_state, t_final=1.0)
