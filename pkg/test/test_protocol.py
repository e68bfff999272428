import unittest

from pyQSDC import (AttackException, AttackParams, BellKind, ProtocolConfig, ProtocolException, decode_bell,
                    encode_symbol, estimate_detection_rate, exact_detection_rate, make_bell, make_rng, run_dpp,
                    run_fpp, within_three_sigma)
from pyQSDC.channel import Eavesdropper
from pyQSDC.protocol import DPP_ENCODED_QUBIT, DPP_REFERENCE, FPP_ENCODED_QUBIT, FPP_REFERENCE, FPPRun, Party
from pyQSDC.qstate import measure_bell_pair
from pyQSDC.sequence import Ancilla, QubitSequence, Register, Tag, WireSequence


class TestDenseCoding(unittest.TestCase):

    def test_round_trip_all_symbols(self):
        rng = make_rng(0)
        for protocol, reference, qubit in (('dpp', DPP_REFERENCE, DPP_ENCODED_QUBIT),
                                           ('fpp', FPP_REFERENCE, FPP_ENCODED_QUBIT)):
            for symbol in range(4):
                kind, _ = measure_bell_pair(encode_symbol(make_bell(reference), qubit, symbol), 0, 1, rng)
                self.assertEqual(decode_bell(kind, protocol), symbol)

    def test_encoding_qubits(self):
        # DPP's second step carries qubit 1; FPP's travel half is qubit 0
        self.assertEqual(DPP_ENCODED_QUBIT, 1)
        self.assertEqual(FPP_ENCODED_QUBIT, 0)

    def test_decode_tables(self):
        self.assertEqual(decode_bell(BellKind.PSI_MINUS, 'dpp'), 0)
        self.assertEqual(decode_bell(BellKind.PHI_PLUS, 'dpp'), 3)
        self.assertEqual(decode_bell(BellKind.PHI_PLUS, 'fpp'), 0)
        self.assertEqual(decode_bell(BellKind.PSI_MINUS, 'fpp'), 3)

    def test_bad_symbol(self):
        with self.assertRaises(ProtocolException):
            encode_symbol(make_bell(BellKind.PHI_PLUS), 0, 4)


class TestParty(unittest.TestCase):

    def test_announce_once(self):
        alice = Party('alice', make_rng(1))
        decoys, bits = alice.prepare_ghz_decoys(3)
        alice.insert_decoys(QubitSequence(), decoys, bits)
        self.assertEqual(len(alice.announce()), 3)
        with self.assertRaises(ProtocolException):
            alice.announce()

    def test_unattacked_decoys_pass(self):
        alice, bob = Party('alice', make_rng(2)), Party('bob', make_rng(3))
        decoys, bits = bob.prepare_ghz_decoys(20)
        merged = bob.insert_decoys(QubitSequence(), decoys, bits)
        checked, detected, stripped = alice.check_ghz_decoys(merged, bob.announce())
        self.assertEqual((checked, detected, len(stripped)), (20, 0, 0))


class TestNoiselessRuns(unittest.TestCase):

    @classmethod
    def setUpClass(self):
        rng = make_rng(42)
        self.message = rng.integers(0, 2, size=2000).tolist()

    def test_fpp_recovers_message(self):
        report = run_fpp(ProtocolConfig(1000, control_prob=0.1, seed=1, message_bits=self.message))
        self.assertFalse(report.aborted)
        self.assertEqual(report.detections, 0)
        self.assertEqual(report.recovered_bits, self.message)
        self.assertEqual(report.bit_error_count, 0)
        self.assertEqual(report.checked, [111, 111])

    def test_dpp_recovers_message(self):
        report = run_dpp(ProtocolConfig(1000, control_prob=0.1, seed=2, message_bits=self.message))
        self.assertFalse(report.aborted)
        self.assertEqual(report.detections, 0)
        self.assertEqual(report.recovered_bits, self.message)
        self.assertEqual(sum(checks[0] for checks in report.basis_checks.values()), report.checked[0])

    def test_short_message_is_padded(self):
        report = run_fpp(ProtocolConfig(5, seed=3, message_bits=[1, 1, 0, 1]))
        self.assertEqual(report.recovered_bits, [1, 1, 0, 1])

    def test_identity_attack_is_invisible(self):
        config = ProtocolConfig(50, attack=AttackParams.identity(), eve_on_second_transmission=True, seed=4)
        for runner in (run_fpp, run_dpp):
            report = runner(config)
            self.assertEqual(report.detections, 0)
            self.assertEqual(report.recovered_bits, config.message_bits)

    def test_fixed_seed_reproducible(self):
        for runner in (run_fpp, run_dpp):
            first = runner(ProtocolConfig(100, attack=AttackParams.from_moduli(0.9, 0.9), abort_threshold=1.0,
                                          seed=5)).to_dict()
            second = runner(ProtocolConfig(100, attack=AttackParams.from_moduli(0.9, 0.9), abort_threshold=1.0,
                                           seed=5)).to_dict()
            self.assertEqual(first, second)


class TestAttackedRuns(unittest.TestCase):

    def test_fpp_full_attack_aborts(self):
        config = ProtocolConfig(100, attack=AttackParams.from_moduli(0.5, 0.5), seed=6)
        report = run_fpp(config)
        self.assertTrue(report.aborted)
        self.assertEqual(report.aborted_at, 1)
        self.assertEqual(report.recovered_bits, [])
        self.assertAlmostEqual(report.analytic_detection_rate, 0.875)

    def test_dpp_flip_attack_aborts(self):
        report = run_dpp(ProtocolConfig(100, attack=AttackParams.flip_and_phase(0.5), seed=7))
        self.assertTrue(report.aborted)
        self.assertEqual(report.aborted_at, 1)

    def test_fpp_empirical_rate_near_analytic(self):
        config = ProtocolConfig(600, control_prob=0.5, attack=AttackParams.from_moduli(0.5, 0.5),
                                abort_threshold=1.0, seed=8)
        report = run_fpp(config)
        self.assertFalse(report.aborted)
        self.assertTrue(within_three_sigma(report.detected[0] / report.checked[0], 0.875, report.checked[0]))

    def test_dpp_exact_rate_for_asymmetric_attack(self):
        # default ancillas copy Z: no Z-basis error, X-basis error 1/2, sampling error 1/2
        config = ProtocolConfig(400, attack=AttackParams.from_moduli(1.0, 1.0), abort_threshold=1.0, seed=15)
        report = run_dpp(config)
        self.assertFalse(report.aborted)
        self.assertAlmostEqual(report.analytic_detection_rate, 0.0)
        self.assertAlmostEqual(report.exact_rates[0], 0.25)
        self.assertAlmostEqual(report.exact_rates[1], 0.5)
        self.assertTrue(within_three_sigma(report.detected[0] / report.checked[0], 0.25, report.checked[0]))
        self.assertTrue(within_three_sigma(report.empirical_detection_rate, report.exact_detection_rate,
                                           report.decoys_checked))

    def test_fpp_exact_rates(self):
        config = ProtocolConfig(10, attack=AttackParams.from_moduli(0.5, 0.5), eve_on_second_transmission=True,
                                abort_threshold=1.0, seed=16)
        report = run_fpp(config)
        self.assertAlmostEqual(report.exact_rates[0], 0.875)
        self.assertAlmostEqual(report.exact_rates[1], 0.875)
        self.assertAlmostEqual(report.exact_detection_rate, 0.875)
        self.assertEqual(run_fpp(ProtocolConfig(10, seed=16)).exact_rates, [0.0, 0.0])

    def test_second_transmission_only(self):
        config = ProtocolConfig(100, attack=AttackParams.flip_and_phase(0.5), eve_on_first_transmission=False,
                                eve_on_second_transmission=True, seed=9)
        report = run_dpp(config)
        self.assertEqual(report.detected[0], 0)
        self.assertTrue(report.aborted)
        self.assertEqual(report.aborted_at, 2)


class TestDetectionEstimate(unittest.TestCase):

    def test_fpp_estimate(self):
        rate, stderr = estimate_detection_rate('fpp', AttackParams.from_moduli(0.5, 0.5), 100000, 1)
        self.assertTrue(within_three_sigma(rate, 0.875, 100000))
        self.assertGreater(stderr, 0)

    def test_dpp_estimate(self):
        rate, _ = estimate_detection_rate('dpp', AttackParams.flip_and_phase(0.25), 100000, 2)
        self.assertTrue(within_three_sigma(rate, 0.25, 100000))

    def test_dpp_second_transmission_estimate(self):
        attack = AttackParams.flip_and_phase(0.25)
        rate, _ = estimate_detection_rate('dpp', attack, 50000, 3, transmission=2)
        self.assertTrue(within_three_sigma(rate, exact_detection_rate('dpp', attack, 2), 50000))

    def test_identity_estimate_is_zero(self):
        for protocol in ('fpp', 'dpp'):
            self.assertEqual(estimate_detection_rate(protocol, AttackParams.identity(), 1000, 4), (0.0, 0.0))

    def test_estimate_is_seeded(self):
        attack = AttackParams.from_moduli(0.75, 0.25)
        self.assertEqual(estimate_detection_rate('fpp', attack, 5000, 9),
                         estimate_detection_rate('fpp', attack, 5000, 9))

    def test_exact_rates(self):
        self.assertAlmostEqual(exact_detection_rate('fpp', AttackParams.from_moduli(0.25, 0.75)),
                               1 - 0.5 * (0.25 ** 3 + 0.75 ** 3))
        self.assertAlmostEqual(exact_detection_rate('dpp', AttackParams.flip_and_phase(0.4)), 0.4)
        self.assertAlmostEqual(exact_detection_rate('dpp', AttackParams.flip_and_phase(0.4), 2), 0.4)

    def test_estimate_errors(self):
        with self.assertRaises(ProtocolException):
            estimate_detection_rate('fpp', AttackParams.identity(), 0, 1)
        with self.assertRaises(ProtocolException):
            estimate_detection_rate('dpp', AttackParams.identity(), 10, 1, transmission=3)
        zero = AttackParams.identity().ancillas[0]
        with self.assertRaises(AttackException):
            estimate_detection_rate('fpp', AttackParams(1, 0, 1, 0, zero, zero, zero, zero), 10, 1)
        with self.assertRaises(ValueError):
            estimate_detection_rate('bb84', AttackParams.identity(), 10, 1)


class TestEveView(unittest.TestCase):

    def test_identity_attack_leaves_ancillas_untouched(self):
        run = FPPRun(ProtocolConfig(20, attack=AttackParams.identity(), eve_on_second_transmission=True, seed=10))
        run.run()
        self.assertEqual(len(run.eve.probes), 2 * (20 + 3 * 20))
        rng = make_rng(12)
        self.assertEqual([ancilla.measure(rng) for ancilla in run.eve.probes], [0] * len(run.eve.probes))

    def test_decoy_ancillas_look_like_message_ancillas(self):
        bob = Party('bob', make_rng(13))
        pairs = QubitSequence()
        for index in range(5):
            pairs.append(Register(make_bell(FPP_REFERENCE), 'pair-{}'.format(index)), FPP_ENCODED_QUBIT,
                         Tag.MESSAGE)
        decoys, bits = bob.prepare_ghz_decoys(5)
        merged = bob.insert_decoys(pairs, decoys, bits)
        eve = Eavesdropper(AttackParams.from_moduli(0.5, 0.5))
        eve.intercept(merged.wire())
        self.assertEqual(len(eve.probes), 5 + 3 * 5)
        decoy_positions = set(merged.decoy_positions())
        decoy_view = [eve.probes[p] for p in range(len(merged)) if p in decoy_positions]
        message_view = [eve.probes[p] for p in range(len(merged)) if p not in decoy_positions]
        for ancilla in decoy_view + message_view:
            self.assertIsInstance(ancilla, Ancilla)
            self.assertEqual(repr(ancilla), repr(message_view[0]))
            self.assertEqual(dir(ancilla), dir(message_view[0]))
            for name in ('register', 'label', 'state', 'qubit'):
                self.assertFalse(hasattr(ancilla, name))

    def test_eve_view_hides_registers_before_announcement(self):
        run = FPPRun(ProtocolConfig(10, attack=AttackParams.identity(), seed=14))
        intercept = run.eve.intercept
        views = []

        def watch(wire):
            intercept(wire)
            views.append([repr(ancilla) for ancilla in run.eve.probes])

        run.eve.intercept = watch
        run.run()
        self.assertEqual(len(views), 1)
        self.assertEqual(set(views[0]), {'Ancilla()'})

    def test_eve_gets_untagged_wire(self):
        seen = []
        run = FPPRun(ProtocolConfig(10, attack=AttackParams.identity(), seed=11))
        run.eve.intercept = seen.append
        run.run()
        self.assertEqual(len(seen), 1)
        self.assertIsInstance(seen[0], WireSequence)
        self.assertEqual(len(seen[0]), 10 + 3 * 10)
