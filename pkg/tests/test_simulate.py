import numpy as np
import pytest

from spin2cv.circuit import Circuit, Gate
from spin2cv.errors import GuardError
from spin2cv.simulate import (
    FockSpace,
    apply_circuit,
    circuit_unitary,
    embed_operator,
    embed_spin_state,
    evolve,
    exact_evolution,
    fock_index,
    gate_unitary,
    hermitian_expm,
    local_gate_unitary,
    mode_operators,
    quadrature_power,
    sparse_generator,
    spin_occupations,
    spin_subspace_indices,
)


def low_block(d):
    # levels whose compressed products are free of truncation artefacts
    return slice(0, d - 2)


class TestQuadratures:
    @pytest.mark.parametrize("d", [4, 7, 12])
    def test_commutator_is_half_i_away_from_edge(self, d):
        ops = mode_operators(d)
        comm = ops.x_matrix @ ops.p_matrix - ops.p_matrix @ ops.x_matrix
        s = low_block(d + 1)
        np.testing.assert_allclose(comm[s, s], 0.5j * np.eye(d - 1), atol=1e-12)

    def test_vacuum_variance_is_a_quarter(self):
        assert quadrature_power("X", 2, 6)[0, 0].real == pytest.approx(0.25)
        assert quadrature_power("P", 2, 6)[0, 0].real == pytest.approx(0.25)

    def test_number_operator(self):
        d = 8
        n = quadrature_power("X", 2, d) + quadrature_power("P", 2, d) - 0.5 * np.eye(d)
        np.testing.assert_allclose(n, np.diag(np.arange(d)), atol=1e-12)

    @pytest.mark.parametrize("power", [1, 2, 3, 4])
    def test_powers_are_compressions_of_a_large_space(self, power):
        big = mode_operators(40).x_matrix
        ref = np.linalg.matrix_power(big, power)[:6, :6]
        np.testing.assert_allclose(quadrature_power("X", power, 6), ref, atol=1e-12)

    def test_x4_vacuum(self):
        # <0|X^4|0> = 3 <X^2>^2
        assert quadrature_power("X", 4, 5)[0, 0].real == pytest.approx(3 / 16)

    def test_cached_copy_is_writable(self):
        m = quadrature_power("X", 2, 5)
        m[0, 0] = 99
        assert quadrature_power("X", 2, 5)[0, 0] != 99


class TestGates:
    def test_fourier_maps_x_to_p(self):
        d = 14
        f = local_gate_unitary(Gate("Fourier", (0,)), d)
        x = mode_operators(d).x_matrix
        p = mode_operators(d).p_matrix
        s = low_block(d)
        np.testing.assert_allclose((f @ x @ f.conj().T)[s, s], p[s, s], atol=1e-12)

    def test_fourier_fourth_power_is_a_phase(self):
        f = local_gate_unitary(Gate("Fourier", (0,)), 12)
        f4 = np.linalg.matrix_power(f, 4)
        phase = f4[0, 0]
        assert abs(abs(phase) - 1) < 1e-12
        np.testing.assert_allclose(f4, phase * np.eye(12), atol=1e-12)

    def test_dagger_inverts(self):
        space = FockSpace(2, 5)
        for g in (Gate("Cz", (0, 1), 0.3), Gate("V", (1,), -0.2), Gate("Fourier", (0,)), Gate("Shift2", (0, 1), 0.1)):
            u = gate_unitary(g, space)
            ui = gate_unitary(g.inverse(), space)
            np.testing.assert_allclose(u @ ui, np.eye(space.dim), atol=1e-12)

    def test_cz_commutes_with_x(self):
        space = FockSpace(2, 6)
        cz = gate_unitary(Gate("Cz", (0, 1), 0.7), space)
        x0 = embed_operator({0: mode_operators(6).x_matrix}, space)
        np.testing.assert_allclose(cz @ x0, x0 @ cz, atol=1e-12)

    def test_time_order_first_gate_acts_first(self):
        space = FockSpace(1, 5)
        a, b = Gate("G", (0,), 0.4), Gate("Fourier", (0,))
        u = circuit_unitary(Circuit(1, (a, b)), space)
        expected = gate_unitary(b, space) @ gate_unitary(a, space)
        np.testing.assert_allclose(u, expected, atol=1e-12)

    def test_apply_matches_dense_on_three_modes(self):
        rng = np.random.default_rng(3)
        space = FockSpace(3, 3)
        circ = Circuit(3, (Gate("Cz", (2, 0), 0.3), Gate("R", (1,), 0.5), Gate("Shift1", (1, 2), -0.4)))
        psi = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
        dense = np.eye(space.dim, dtype=complex)
        for g in circ.gates:
            dense = gate_unitary(g, space) @ dense
        np.testing.assert_allclose(apply_circuit(circ, psi, space), dense @ psi, atol=1e-12)

    def test_circuit_unitary_columns(self):
        space = FockSpace(2, 4)
        circ = Circuit(2, (Gate("Cz", (0, 1), 0.3), Gate("Fourier", (1,))))
        full = circuit_unitary(circ, space)
        np.testing.assert_allclose(circuit_unitary(circ, space, columns=[3, 7]), full[:, [3, 7]])


class TestEvolution:
    def test_hermitian_expm_matches_sparse(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = a + a.conj().T
        psi = rng.normal(size=6).astype(complex)
        np.testing.assert_allclose(hermitian_expm(h, 0.3) @ psi, evolve(h, 0.3, psi), atol=1e-10)

    def test_exact_evolution_uses_gate_sign(self):
        h = np.diag([1.0, -2.0])
        np.testing.assert_allclose(exact_evolution(h, 0.5), np.diag(np.exp(0.5j * np.array([1, -2]))))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            exact_evolution(np.array([[0, 1], [0, 0]]), 1.0)

    def test_sparse_generator_matches_dense(self):
        space = FockSpace(3, 3)
        local = {0: quadrature_power("X", 2, 3), 2: quadrature_power("P", 1, 3)}
        np.testing.assert_allclose(sparse_generator(local, space).toarray(), embed_operator(local, space))


class TestSpinEmbedding:
    def test_occupations(self):
        assert spin_occupations("↑↓") == [1, 0, 0, 1]
        assert spin_occupations("ud") == spin_occupations("01")

    def test_bad_symbol(self):
        with pytest.raises(ValueError):
            spin_occupations("x")

    def test_index_and_state(self):
        psi = embed_spin_state("↑↓", 3)
        assert psi[fock_index([1, 0, 0, 1], 3)] == 1 and np.count_nonzero(psi) == 1

    def test_subspace_order(self):
        idx = spin_subspace_indices(2, 2)
        assert list(idx) == [fock_index(o, 2) for o in ([1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1])]


def test_space_guard():
    with pytest.raises(GuardError):
        FockSpace(8, 6)
