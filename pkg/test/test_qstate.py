import unittest

import numpy as np

from pyQSDC import (CNOT, DENSE_CODING_UNITARIES, HADAMARD, BellKind, LocalUnitary, StateException, StateVector,
                    U1, U2, apply_local, apply_two_local, basis_state, bell_probabilities, fidelity, inner, make_bell,
                    make_ghz4, make_rng, measure_bell_pair, measure_x, measure_z, plus_state, probabilities, tensor)


class TestStateVector(unittest.TestCase):

    def test_num_qubits(self):
        self.assertEqual(basis_state('0110').num_qubits, 4)
        self.assertEqual(len(make_ghz4()), 16)

    def test_not_power_of_two(self):
        with self.assertRaises(StateException):
            StateVector([1, 0, 0])

    def test_not_normalized(self):
        with self.assertRaises(StateException):
            StateVector([1, 1])

    def test_not_finite(self):
        with self.assertRaises(StateException):
            StateVector([np.nan, 0])

    def test_amplitudes_read_only(self):
        state = basis_state('0')
        with self.assertRaises(ValueError):
            state.amplitudes[0] = 0

    def test_basis_state_index(self):
        # qubit 0 is the most significant bit
        self.assertEqual(np.argmax(np.abs(basis_state('10').amplitudes)), 2)

    def test_plus_state(self):
        self.assertAlmostEqual(fidelity(plus_state(), apply_local(basis_state('0'), 0, HADAMARD)), 1.0)


class TestBellAndGhz(unittest.TestCase):

    def test_bell_states_orthonormal(self):
        kinds = list(BellKind)
        for first in kinds:
            for second in kinds:
                expected = 1.0 if first is second else 0.0
                self.assertAlmostEqual(abs(inner(make_bell(first), make_bell(second))), expected)

    def test_psi_minus_amplitudes(self):
        h = 1 / np.sqrt(2)
        np.testing.assert_allclose(make_bell(BellKind.PSI_MINUS).amplitudes, [0, h, -h, 0], atol=1e-12)

    def test_ghz4(self):
        amplitudes = make_ghz4().amplitudes
        self.assertAlmostEqual(abs(amplitudes[0]) ** 2, 0.5)
        self.assertAlmostEqual(abs(amplitudes[15]) ** 2, 0.5)
        self.assertAlmostEqual(float(np.sum(np.abs(amplitudes[1:15]))), 0.0)

    def test_tensor_order(self):
        state = tensor(basis_state('1'), basis_state('0'))
        self.assertAlmostEqual(fidelity(state, basis_state('10')), 1.0)


class TestGates(unittest.TestCase):

    def test_local_unitary_rejects_non_unitary(self):
        with self.assertRaises(StateException):
            LocalUnitary([[1, 1], [0, 1]])

    def test_local_unitary_shape(self):
        with self.assertRaises(StateException):
            LocalUnitary(np.eye(3))

    def test_dagger(self):
        u = DENSE_CODING_UNITARIES[3]
        np.testing.assert_allclose(u.dagger().matrix @ u.matrix, np.eye(2), atol=1e-12)

    def test_apply_local_targets_one_qubit(self):
        state = apply_local(basis_state('00'), 1, U2)
        self.assertAlmostEqual(fidelity(state, basis_state('01')), 1.0)

    def test_apply_local_bad_index(self):
        with self.assertRaises(StateException):
            apply_local(basis_state('00'), 2, U1)

    def test_apply_local_norm_preserved(self):
        state = make_ghz4()
        for qubit, u in enumerate(DENSE_CODING_UNITARIES):
            state = apply_local(state, qubit, u)
        self.assertAlmostEqual(state.norm(), 1.0, places=12)

    def test_apply_two_local_cnot(self):
        state = apply_two_local(basis_state('100'), 0, 2, CNOT)
        self.assertAlmostEqual(fidelity(state, basis_state('101')), 1.0)

    def test_apply_two_local_reversed_pair(self):
        state = apply_two_local(basis_state('01'), 1, 0, CNOT)
        self.assertAlmostEqual(fidelity(state, basis_state('11')), 1.0)

    def test_apply_two_local_same_qubit(self):
        with self.assertRaises(StateException):
            apply_two_local(basis_state('00'), 1, 1, CNOT)

    def test_dense_coding_from_psi_minus(self):
        expected = [BellKind.PSI_MINUS, BellKind.PSI_PLUS, BellKind.PHI_MINUS, BellKind.PHI_PLUS]
        for u, kind in zip(DENSE_CODING_UNITARIES, expected):
            self.assertAlmostEqual(fidelity(apply_local(make_bell(BellKind.PSI_MINUS), 1, u), make_bell(kind)), 1.0)

    def test_dense_coding_from_phi_plus(self):
        expected = [BellKind.PHI_PLUS, BellKind.PHI_MINUS, BellKind.PSI_PLUS, BellKind.PSI_MINUS]
        for u, kind in zip(DENSE_CODING_UNITARIES, expected):
            self.assertAlmostEqual(fidelity(apply_local(make_bell(BellKind.PHI_PLUS), 0, u), make_bell(kind)), 1.0)


class TestMeasurement(unittest.TestCase):

    def test_measure_z_deterministic(self):
        rng = make_rng(1)
        bit, state = measure_z(basis_state('01'), 1, rng)
        self.assertEqual(bit, 1)
        self.assertAlmostEqual(fidelity(state, basis_state('01')), 1.0)

    def test_ghz_correlation(self):
        rng = make_rng(2)
        for _ in range(20):
            state = make_ghz4()
            bits = []
            for qubit in range(4):
                bit, state = measure_z(state, qubit, rng)
                bits.append(bit)
            self.assertEqual(len(set(bits)), 1)

    def test_measure_z_statistics(self):
        rng = make_rng(3)
        trials = 100000
        ones = sum(measure_z(plus_state(), 0, rng)[0] for _ in range(trials))
        self.assertLessEqual(abs(ones / trials - 0.5), 3 * np.sqrt(0.25 / trials))

    def test_measure_x_statistics_on_tilted_state(self):
        # cos(pi/8)|+> + sin(pi/8)|->: bit 1 with probability sin^2(pi/8)
        theta = np.pi / 8
        plus, minus = np.cos(theta), np.sin(theta)
        state = StateVector([(plus + minus) / np.sqrt(2), (plus - minus) / np.sqrt(2)])
        rng = make_rng(7)
        trials = 100000
        ones = sum(measure_x(state, 0, rng)[0] for _ in range(trials))
        expected = np.sin(theta) ** 2
        self.assertLessEqual(abs(ones / trials - expected), 3 * np.sqrt(expected * (1 - expected) / trials))

    def test_psi_minus_anticorrelated_in_both_bases(self):
        rng = make_rng(8)
        for measure in (measure_z, measure_x):
            for _ in range(200):
                first, state = measure(make_bell(BellKind.PSI_MINUS), 0, rng)
                second, _ = measure(state, 1, rng)
                self.assertNotEqual(first, second)

    def test_measure_x_on_plus(self):
        rng = make_rng(4)
        for _ in range(10):
            bit, state = measure_x(plus_state(), 0, rng)
            self.assertEqual(bit, 0)
            self.assertAlmostEqual(fidelity(state, plus_state()), 1.0)

    def test_probabilities_marginal(self):
        distribution = probabilities(make_ghz4(), [0, 3])
        np.testing.assert_allclose(distribution, [0.5, 0, 0, 0.5], atol=1e-12)

    def test_probabilities_order(self):
        distribution = probabilities(basis_state('10'), [1, 0])
        np.testing.assert_allclose(distribution, [0, 1, 0, 0], atol=1e-12)

    def test_bell_measurement_identifies_each_state(self):
        rng = make_rng(5)
        for kind in BellKind:
            outcome, _ = measure_bell_pair(make_bell(kind), 0, 1, rng)
            self.assertIs(outcome, kind)
            self.assertAlmostEqual(bell_probabilities(make_bell(kind), 0, 1)[kind], 1.0)

    def test_bell_measurement_on_larger_register(self):
        rng = make_rng(6)
        state = tensor(basis_state('1'), make_bell(BellKind.PSI_PLUS))
        outcome, collapsed = measure_bell_pair(state, 1, 2, rng)
        self.assertIs(outcome, BellKind.PSI_PLUS)
        self.assertAlmostEqual(fidelity(collapsed, state), 1.0)
