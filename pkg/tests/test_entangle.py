"""Tests for concurrence, negativity, and witness construction."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polent.entangle import (
    PAULI_LABELS,
    NotEntangledError,
    Witness,
    concurrence,
    construct_witness,
    negativity,
    pair_operator,
    pauli_decompose,
    separable_floor,
    spin_flip,
)
from polent.lindblad import build_liouvillian, steady_state
from polent.model import DimensionlessParams, build_effective_model
from polent.qops import SIGMA_Y, SIGMA_Z, TWO_QUBITS, DensityMatrix

BELL = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2)
BELL_RHO = DensityMatrix(TWO_QUBITS, np.outer(BELL, BELL.conj()))


def pure(state):
    v = np.asarray(state, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(TWO_QUBITS, np.outer(v, v.conj()))


def random_density(rng, d=4):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return DensityMatrix(TWO_QUBITS, m / np.trace(m))


def random_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_product(rng):
    return pure(np.kron(random_qubit(rng), random_qubit(rng)))


def random_unitary(rng, d=2):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def werner(p):
    m = p * np.outer(BELL, BELL.conj()) + (1 - p) * np.eye(4) / 4
    return DensityMatrix(TWO_QUBITS, m)


def test_pair_operator_ordering():
    # first label acts on qubit 1, the fast index
    assert_allclose(np.diag(pair_operator("z", "id")).real, [1, -1, 1, -1])
    assert_allclose(np.diag(pair_operator("id", "z")).real, [1, 1, -1, -1])
    assert_allclose(pair_operator("y", "z"), np.kron(SIGMA_Z, SIGMA_Y), atol=0)
    assert_allclose(pair_operator("id", "id"), np.eye(4), atol=0)


def test_spin_flip_known_states():
    # the flip fixes the Bell state and swaps the computational extremes
    assert_allclose(spin_flip(BELL_RHO).matrix, BELL_RHO.matrix, atol=1e-15)
    gg = pure([0, 0, 0, 1])
    flipped = spin_flip(gg)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert_allclose(flipped.matrix, expected, atol=1e-15)


def test_spin_flip_is_an_involution():
    rng = np.random.default_rng(21)
    rho = random_density(rng)
    twice = spin_flip(DensityMatrix(TWO_QUBITS, spin_flip(rho).matrix))
    assert_allclose(twice.matrix, rho.matrix, atol=1e-14)
    once = spin_flip(rho).matrix
    assert_allclose(np.trace(once), 1.0, atol=1e-14)
    assert_allclose(once, once.conj().T, atol=1e-14)


def test_concurrence_bell_state():
    assert_allclose(concurrence(BELL_RHO), 1.0, atol=1e-12)


def test_concurrence_product_states():
    rng = np.random.default_rng(33)
    assert concurrence(pure([0, 1, 0, 0])) <= 1e-12
    for _ in range(25):
        assert concurrence(random_product(rng)) <= 1e-10


def test_concurrence_of_superpositions():
    # a|ee> + b|gg> has concurrence 2|a||b|
    rng = np.random.default_rng(17)
    for _ in range(25):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        norm = np.hypot(abs(a), abs(b))
        a, b = a / norm, b / norm
        rho = pure([a, 0, 0, b])
        assert_allclose(concurrence(rho), 2 * abs(a) * abs(b), atol=1e-10)


def test_concurrence_werner_line():
    # C = max(0, (3p - 1)/2) along the isotropic family
    assert_allclose(concurrence(werner(1.0)), 1.0, atol=1e-12)
    assert_allclose(concurrence(werner(0.8)), 0.7, atol=1e-12)
    assert concurrence(werner(1 / 3)) <= 1e-12
    assert concurrence(werner(0.1)) == 0.0


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(41)
    for _ in range(20):
        rho = random_density(rng)
        u = np.kron(random_unitary(rng), random_unitary(rng))
        rotated = DensityMatrix(TWO_QUBITS, u @ rho.matrix @ u.conj().T)
        assert abs(concurrence(rotated) - concurrence(rho)) <= 1e-9


def test_negativity_values():
    assert_allclose(negativity(BELL_RHO), 0.5, atol=1e-12)
    assert negativity(pure([0, 1, 0, 0])) == 0.0
    assert_allclose(negativity(werner(0.8)), 0.35, atol=1e-12)
    assert negativity(werner(0.2)) == 0.0


def test_concurrence_negativity_agree_on_detection():
    rng = np.random.default_rng(55)
    for _ in range(100):
        rho = random_density(rng)
        c, n = concurrence(rho), negativity(rho)
        assert not (c > 1e-8 and n < 1e-12), (c, n)
        assert not (n > 1e-8 and c < 1e-12), (c, n)


def test_separable_mixtures_are_undetected():
    rng = np.random.default_rng(66)
    for _ in range(20):
        weights = rng.dirichlet(np.ones(4))
        m = sum(w * random_product(rng).matrix for w in weights)
        rho = DensityMatrix(TWO_QUBITS, m)
        assert concurrence(rho) <= 1e-8
        assert negativity(rho) <= 1e-10


def test_witness_of_bell_state():
    w = construct_witness(BELL_RHO)
    assert_allclose(w.expectation(BELL_RHO), -0.5, atol=1e-12)
    assert_allclose(np.linalg.norm(w.op.matrix), 1.0, atol=1e-12)
    assert_allclose(w.op.matrix, w.op.matrix.conj().T, atol=1e-14)
    assert w.coefficients.shape == (4, 4)
    assert w.coefficients.dtype == np.float64


def test_witness_expectation_reads_negativity():
    # one negative transpose eigenvalue, so Tr[W rho] = -N(rho)
    model = build_effective_model(DimensionlessParams(10.0, 2.135))
    rho = steady_state(build_liouvillian(model)).rho
    w = construct_witness(rho)
    assert w.expectation(rho) < 0
    assert_allclose(w.expectation(rho), -negativity(rho), atol=1e-10)


def test_witness_is_deterministic():
    model = build_effective_model(DimensionlessParams(10.0, 2.135))
    rho = steady_state(build_liouvillian(model)).rho
    w1 = construct_witness(rho)
    w2 = construct_witness(rho)
    assert np.array_equal(w1.op.matrix, w2.op.matrix)
    assert np.array_equal(w1.coefficients, w2.coefficients)


def test_witness_rejects_separable_states():
    with pytest.raises(NotEntangledError):
        construct_witness(pure([0, 0, 0, 1]))
    rng = np.random.default_rng(8)
    with pytest.raises(NotEntangledError):
        construct_witness(random_product(rng))


def test_witness_coefficient_consistency():
    w = construct_witness(BELL_RHO)
    with pytest.raises(ValueError):
        Witness(w.op, w.coefficients + 0.1)


def test_pauli_decompose_basis_elements():
    c = pauli_decompose(np.eye(4, dtype=complex))
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert_allclose(c, expected, atol=1e-15)
    c = pauli_decompose(pair_operator("z", "z"))
    expected = np.zeros((4, 4))
    expected[3, 3] = 1.0
    assert_allclose(c, expected, atol=1e-15)


def test_pauli_decompose_roundtrip():
    rng = np.random.default_rng(77)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g + g.conj().T
    c = pauli_decompose(m)
    rebuilt = sum(
        c[j, k] * pair_operator(PAULI_LABELS[j], PAULI_LABELS[k])
        for j in range(4)
        for k in range(4)
    )
    assert_allclose(rebuilt, m, atol=1e-12)


def test_pauli_decompose_validation():
    with pytest.raises(ValueError):
        pauli_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        pauli_decompose(np.triu(np.ones((4, 4))))


def test_separable_floor_nonnegative_and_reproducible():
    w = construct_witness(BELL_RHO)
    floor = separable_floor(w, n_pure=300, n_mixed=60)
    assert floor >= -1e-8
    assert floor == separable_floor(w, n_pure=300, n_mixed=60)
    # entangled expectation sits strictly below the separable floor
    assert w.expectation(BELL_RHO) < floor
