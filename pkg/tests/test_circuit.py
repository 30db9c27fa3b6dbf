import numpy as np
import pytest

from spin2cv.circuit import (
    IDENTITIES,
    UNIVERSAL_KINDS,
    Circuit,
    Gate,
    cancel_fourier_pairs,
    decompose_four_mode,
    decompose_quadratic,
    decompose_quartic_gate,
    decompose_shift1,
    decompose_shift2,
    decompose_term,
    decompose_two_mode,
    expand_quartic,
    lower,
    shift2_parameters,
    shifted_quartic,
)
from spin2cv.simulate import FockSpace, apply_circuit, circuit_unitary, quadrature_power
from spin2cv.terms import QuadratureTerm
from spin2cv.verify import decomposition_error


def position_action(gates, points):
    """Phase picked up by a constant wavefunction under Q/Shift1 gates, evaluated at `points`.

    In the position representation Q multiplies by exp(i b x^4) and
    exp(i th P_t X_s) translates x_t by th x_s / 2, so the circuit maps
    psi(x) to exp(i phi(x)) psi(x') exactly; with psi = 1 only phi remains.
    """
    x = np.array(points, dtype=float)
    phase = np.zeros(len(x))
    # Schroedinger picture: each later gate sees the coordinate map of the earlier ones reversed
    for g in reversed(gates):
        if g.kind == "Q":
            b = -g.param if g.dagger else g.param
            phase += b * x[:, g.modes[0]] ** 4
        elif g.kind == "Shift1":
            th = -g.param if g.dagger else g.param
            t, s = g.modes
            x[:, t] = x[:, t] + th * x[:, s] / 2
        else:
            raise AssertionError(f"position oracle does not handle {g.kind}")
    return phase


def product_phase_on_vacuum(local_ops, alpha):
    """exp(i alpha prod_m op_m)|0...0> using the eigenbasis of each commuting factor."""
    vals, vecs = zip(*(np.linalg.eigh(op) for op in local_ops))
    amp = np.ones(())
    phase = np.ones(())
    for w, v in zip(vals, vecs):
        amp = np.multiply.outer(amp, v[0, :].conj())
        phase = np.multiply.outer(phase, w)
    psi = amp * np.exp(1j * alpha * phase)
    for m, v in enumerate(vecs):
        psi = np.moveaxis(np.tensordot(v, psi, axes=([1], [m])), 0, m)
    return psi


def x_term(coeff, n=4, power=1):
    return QuadratureTerm(coeff, tuple((m, "X", power) for m in range(n)))


class TestGateIR:
    @pytest.mark.parametrize(
        "args",
        [("Cz", (0,)), ("Cz", (1, 1)), ("Q", (0, 1)), ("Foo", (0,)), ("R", (-1,))],
    )
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            Gate(*args)

    def test_fourier_has_no_parameter(self):
        with pytest.raises(ValueError):
            Gate("Fourier", (0,), 0.3)

    def test_inverse(self):
        g = Gate("V", (2,), 0.5)
        assert g.inverse() == Gate("V", (2,), 0.5, True)
        assert g.inverse().inverse() == g

    def test_circuit_bounds_and_level(self):
        with pytest.raises(ValueError):
            Circuit(1, (Gate("Cz", (0, 1), 0.1),))
        with pytest.raises(ValueError):
            Circuit(2, (Gate("Q", (0,), 0.1),), "universal")

    def test_repeat_and_then(self):
        c = Circuit(2, (Gate("R", (0,), 1.0), Gate("Cz", (0, 1), 0.2)))
        assert len(c.repeated(3)) == 3 * len(c)
        assert c.then(c).gates == c.repeated(2).gates
        assert c.counts() == {"R": 1, "Cz": 1}


class TestPositionOracle:
    @pytest.mark.parametrize("identity", IDENTITIES)
    def test_four_mode_block_is_exact(self, identity):
        rng = np.random.default_rng(11)
        pts = rng.uniform(-2, 2, size=(64, 4))
        c = decompose_four_mode(x_term(-1.3), identity, 0.4)
        assert set(c.counts()) == {"Q", "Shift1"}
        np.testing.assert_allclose(position_action(c.gates, pts), -1.3 * 0.4 * np.prod(pts, axis=1), atol=1e-10)

    def test_two_mode_block_is_exact(self):
        rng = np.random.default_rng(12)
        pts = rng.uniform(-2, 2, size=(64, 2))
        c = decompose_two_mode(x_term(0.7, n=2, power=2), 0.3)
        assert c.counts() == {"Q": 4, "Shift1": 4}
        np.testing.assert_allclose(position_action(c.gates, pts), 0.21 * pts[:, 0] ** 2 * pts[:, 1] ** 2, atol=1e-10)

    @pytest.mark.parametrize("signs", [(1, 1, 0, 0), (1, -1, 1, -1), (0, -1, 1, 0), (0, 0, 0, -1)])
    def test_shifted_quartic(self, signs):
        rng = np.random.default_rng(13)
        pts = rng.uniform(-2, 2, size=(32, 4))
        gates = shifted_quartic((0, 1, 2, 3), signs, 0.25)
        np.testing.assert_allclose(position_action(gates, pts), 0.25 * (pts @ np.array(signs)) ** 4, atol=1e-10)

    def test_empty_signs(self):
        assert shifted_quartic((0, 1), (0, 0), 1.0) == []


class TestTermDecompositions:
    def test_counts_per_identity(self):
        assert decompose_four_mode(x_term(1.0), "eight_term").counts() == {"Q": 8, "Shift1": 48}
        assert decompose_four_mode(x_term(1.0), "fifteen_term").counts() == {"Q": 15, "Shift1": 34}

    def test_p_factors_are_fourier_wrapped(self):
        term = QuadratureTerm(1.0, ((0, "P", 1), (1, "X", 1), (2, "X", 1), (3, "P", 1)))
        gates = decompose_four_mode(term, "eight_term", 0.1).gates
        assert [(g.kind, g.modes, g.dagger) for g in gates[:2]] == [("Fourier", (0,), True), ("Fourier", (3,), True)]
        assert [(g.kind, g.modes, g.dagger) for g in gates[-2:]] == [("Fourier", (0,), False), ("Fourier", (3,), False)]

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            decompose_four_mode(x_term(1.0, n=2, power=2))
        with pytest.raises(ValueError):
            decompose_two_mode(x_term(1.0))
        with pytest.raises(ValueError):
            decompose_four_mode(x_term(1.0), "nine_term")

    def test_zero_angle_is_empty(self):
        assert len(decompose_term(x_term(1.0), angle=0.0)) == 0
        assert len(decompose_quadratic(QuadratureTerm(0.5, ((0, "X", 2),)), 0.0)) == 0

    def test_quadratic(self):
        c = decompose_quadratic(QuadratureTerm(0.5, ((1, "P", 2),)), 2.0)
        assert [(g.kind, g.param, g.dagger) for g in c.gates] == [
            ("Fourier", 0.0, True), ("G", 1.0, False), ("Fourier", 0.0, False)
        ]

    def test_mixed_four_mode_on_fock(self):
        # P X X P term, checked against the exact exponential on the vacuum
        quads = ("P", "X", "X", "P")
        term = QuadratureTerm(1.0, tuple((m, q, 1) for m, q in enumerate(quads)))
        alpha, d, big = 0.1, 8, 24
        out = apply_circuit(decompose_four_mode(term, "eight_term", alpha), np.eye(d**4)[:, 0], FockSpace(4, d))
        ref = product_phase_on_vacuum([quadrature_power(q, 1, big) for q in quads], alpha)
        assert np.linalg.norm(ref[:d, :d, :d, :d].ravel() - out) < 1e-2


class TestShiftGates:
    def test_shift1_structure(self):
        c = decompose_shift1(0, 1, 0.3)
        assert [(g.kind, g.dagger) for g in c.gates] == [("Fourier", True), ("Cz", False), ("Fourier", False)]

    def test_shift1_matches_exponential(self):
        assert decomposition_error("shift1", 0.3, 20) < 1e-6

    def test_shift2_parameters(self):
        s, gamma, corr = shift2_parameters(0.03)
        assert 3 * s**2 * gamma == pytest.approx(0.03)
        assert corr == pytest.approx(-2.25 * gamma * s**3)
        _, gamma_neg, _ = shift2_parameters(-0.03)
        assert gamma_neg == -gamma

    def test_shift2_structure(self):
        c = decompose_shift2(0, 1, 0.03)
        assert c.counts() == {"V": 5, "Cz": 4, "Fourier": 8}
        assert c.gates[0].kind == "V" and c.gates[0].modes == (1,)

    def test_shift2_converges_with_cutoff(self):
        errs = [decomposition_error("shift2", 0.03, d) for d in (6, 8, 10)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[-1] < 1e-3

    def test_distinct_modes(self):
        with pytest.raises(ValueError):
            decompose_shift2(1, 1, 0.1)
        with pytest.raises(ValueError):
            decompose_quartic_gate(0, 0, 0.1)


class TestQuarticGate:
    def test_structure(self):
        c = decompose_quartic_gate(0, 1, 0.05)
        assert c.counts() == {"Shift2": 3, "G": 2, "Fourier": 2}

    def test_zero_alpha_keeps_shape(self):
        c = decompose_quartic_gate(0, 1, 0.0)
        assert len(c) == 7 and all(g.param == 0 for g in c.gates)

    def test_converges_with_cutoff(self):
        errs = [decomposition_error("quartic", 0.05, d) for d in (6, 8, 10)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[-1] < 1e-3

    @pytest.mark.parametrize("ancilla_state", [0, 1, 2])
    def test_ancilla_returns_to_input(self, ancilla_state):
        # compare the reduced target state for different ancilla inputs at a generous cutoff
        d = 12
        space = FockSpace(2, d)
        psi = np.zeros(space.dim, complex)
        psi[ancilla_state] = 1.0  # target vacuum, ancilla |n>
        out = apply_circuit(decompose_quartic_gate(0, 1, 0.02), psi, space).reshape(d, d)
        overlap = abs(out[:, ancilla_state] @ out[:, ancilla_state].conj())
        assert overlap > 0.99


class TestLowering:
    def test_lowered_is_universal_with_ancilla(self):
        raw = decompose_four_mode(x_term(1.0), "eight_term", 0.1)
        low = lower(raw)
        assert low.level == "universal" and low.n_modes == 5
        assert all(g.kind in UNIVERSAL_KINDS for g in low.gates)

    def test_lower_is_idempotent(self):
        low = lower(decompose_two_mode(x_term(0.5, n=2, power=2), 0.1))
        assert lower(low) is low

    def test_explicit_ancilla(self):
        c = expand_quartic(Circuit(2, (Gate("Q", (0,), 0.1),)), ancilla=4)
        assert c.n_modes == 5 and {g.modes[0] for g in c.gates if g.kind == "Shift2"} == {4}

    def test_peephole_preserves_unitary(self):
        raw = decompose_two_mode(QuadratureTerm(0.5, ((0, "P", 2), (1, "X", 2))), 0.1)
        a = lower(raw, peephole=False)
        b = lower(raw, peephole=True)
        assert len(b) < len(a)
        space = FockSpace(3, 4)
        np.testing.assert_allclose(circuit_unitary(a, space), circuit_unitary(b, space), atol=1e-10)

    def test_cancel_fourier_pairs(self):
        f, fd = Gate("Fourier", (0,)), Gate("Fourier", (0,), dagger=True)
        cz = Gate("Cz", (0, 1), 0.1)
        assert cancel_fourier_pairs([f, fd, cz]) == [cz]
        assert cancel_fourier_pairs([f, cz, fd]) == [f, cz, fd]
        assert cancel_fourier_pairs([fd, fd, f, f]) == []
        assert cancel_fourier_pairs([f, Gate("Cz", (1, 2), 0.1), fd]) == [Gate("Cz", (1, 2), 0.1)]
        assert cancel_fourier_pairs([f, f]) == [f, f]
