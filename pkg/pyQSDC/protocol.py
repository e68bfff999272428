"""
Executable runs of the two quantum secure direct communication
protocols:

DPP: Alice sends both halves of a block of |psi-> pairs in two steps.
The first transmission is checked with random Z/X measurements of
chosen pairs, the second with sampling pairs carrying random operations.

FPP: Bob keeps the home halves of a block of |phi+> pairs and sends the
travel halves mixed with particles 2-4 of four-particle GHZ states;
Alice checks them, dense-codes her message on the travel halves and
sends them back mixed with her own GHZ decoys.
"""

import logging

import numpy as np

from . import analysis
from .analysis import Protocol
from .channel import (Eavesdropper, attack_ghz_travel, attack_qubit, expected_dpp_error, expected_fpp_detection,
                      validate_attack)
from .config import RunReport
from .exceptions import AttackException, ProtocolException
from .qstate import (DENSE_CODING_UNITARIES, HADAMARD, BellKind, apply_local, bell_probabilities, make_bell,
                     make_ghz4, measure_bell_pair, measure_x, measure_z, probabilities)
from .sequence import QubitSequence, Register, Tag
from .utilities import binomial_stderr, bits_to_symbols, decoy_count, make_rng, symbols_to_bits

logger = logging.getLogger(__name__)

# Bell outcome -> 2-bit symbol; U_k turns the reference state into the k-th entry
DPP_DECODING = {BellKind.PSI_MINUS: 0, BellKind.PSI_PLUS: 1, BellKind.PHI_MINUS: 2, BellKind.PHI_PLUS: 3}
FPP_DECODING = {BellKind.PHI_PLUS: 0, BellKind.PHI_MINUS: 1, BellKind.PSI_PLUS: 2, BellKind.PSI_MINUS: 3}

DPP_REFERENCE = BellKind.PSI_MINUS
FPP_REFERENCE = BellKind.PHI_PLUS

# Pair qubit the sender dense-codes on: DPP's second-step particle, FPP's travel half
DPP_ENCODED_QUBIT = 1
FPP_ENCODED_QUBIT = 0

_BASES = ('Z', 'X')


def encode_symbol(state, qubit, symbol):
    """Dense coding: applies U_symbol to qubit"""
    if symbol not in (0, 1, 2, 3):
        raise ProtocolException('symbol must be 0..3, got {!r}'.format(symbol))
    return apply_local(state, qubit, DENSE_CODING_UNITARIES[symbol])


def decode_bell(kind, protocol):
    """2-bit symbol carried by a Bell outcome, for the protocol's reference state"""
    table = DPP_DECODING if Protocol(protocol) is Protocol.DPP else FPP_DECODING
    return table[kind]


class Party(object):
    """
    A legitimate participant.  Decoy positions and check results stay in
    the party's private state until announce() is called.
    """

    def __init__(self, name, rng):
        self.name = name
        self._rng = rng
        self._announcement = None

    def __repr__(self):
        return 'Party(%r)' % self.name

    def prepare_ghz_decoys(self, count):
        """
        Prepares count GHZ states, measures particle 1 of each in Z and
        returns particles 2-4 of all of them as a decoy sequence, plus the
        particle-1 bits.
        """
        decoys = QubitSequence()
        bits = []
        for index in range(count):
            register = Register(make_ghz4(), '{}-ghz-{}'.format(self.name, index))
            bit, register.state = measure_z(register.state, 0, self._rng)
            bits.append(bit)
            for particle in (1, 2, 3):
                decoys.append(register, particle, Tag.DECOY)
        return decoys, bits

    def insert_decoys(self, sequence, decoys, bits):
        """
        Inserts decoys at random positions of sequence, keeping the order
        of sequence's own entries.  The positions of each GHZ group and its
        particle-1 bit are held back for announce().
        """
        merged = sequence.with_decoys_inserted(decoys, self._rng)
        groups = {}
        for position, (register, _, tag) in enumerate(merged):
            if tag is Tag.DECOY:
                groups.setdefault(id(register), []).append(position)
        group_positions = [groups[id(decoys[3 * i][0])] for i in range(len(bits))]
        self._announcement = list(zip(group_positions, bits))
        return merged

    def announce(self):
        """Publishes the held-back decoy information (once)"""
        if self._announcement is None:
            raise ProtocolException('{} has nothing to announce'.format(self.name))
        announcement, self._announcement = self._announcement, None
        return announcement

    def check_ghz_decoys(self, received, announcement):
        """
        Measures every announced decoy particle in Z; a group counts as a
        detection when any of its three bits differs from the announced
        particle-1 bit.

        :return: (groups checked, detections, received sequence without decoys)
        """
        detections = 0
        positions = []
        for group_positions, bit in announcement:
            outcomes = []
            for position in group_positions:
                register, qubit, _ = received[position]
                outcome, register.state = measure_z(register.state, qubit, self._rng)
                outcomes.append(outcome)
            if any(outcome != bit for outcome in outcomes):
                detections += 1
            positions.extend(group_positions)
        return len(announcement), detections, received.without_positions(positions)


class ProtocolRun(object):
    """Shared plumbing of a single, sequential protocol run"""

    protocol = None

    def __init__(self, config):
        self.config = config
        self.rng = make_rng(config.seed)
        self.eve = Eavesdropper(config.attack) if config.attack is not None else None
        self.stage = 'init'
        self.report = RunReport(self.protocol.value, config.seed, self._analytic_rate(), self._exact_rates())

    def __repr__(self):
        return '%s(config = %r, stage = %r)' % (self.__class__.__name__, self.config, self.stage)

    def _analytic_rate(self):
        raise NotImplementedError  # pragma: no cover

    def _exact_rates(self):
        """Detection probabilities of the first and second check under this run's attack"""
        raise NotImplementedError  # pragma: no cover

    def _enter(self, stage):
        logger.debug('%s seed=%s: %s', self.protocol.value, self.config.seed, stage)
        self.stage = stage

    def _transmit(self, sequence, transmission):
        if self.config.eve_attacks(transmission):
            self.eve.intercept(sequence.wire())

    def _check_passes(self, transmission, checked, detected):
        """Records a check; aborts the run if the detection rate exceeds the threshold"""
        self.report.record_check(transmission, checked, detected)
        if checked > 0 and detected / checked > self.config.abort_threshold:
            logger.info('%s run seed=%s aborted after check %s: %s of %s detected', self.protocol.value,
                        self.config.seed, transmission, detected, checked)
            self.report.abort(transmission)
            self._enter('aborted')
            return False
        return True

    def _padded_symbols(self, n_pairs):
        symbols = bits_to_symbols(self.config.message_bits)
        return symbols + [0] * (n_pairs - len(symbols))

    def _finish(self, decoded_symbols):
        message = self.config.message_bits
        recovered = symbols_to_bits(decoded_symbols)[:len(message)]
        self.report.recovered_bits = recovered
        self.report.bit_error_count = sum(1 for sent, got in zip(message, recovered) if sent != got)
        self._enter('done')
        return self.report


class FPPRun(ProtocolRun):
    """GHZ-decoy protocol; Bob is the sender of the first transmission"""

    protocol = Protocol.FPP

    def _analytic_rate(self):
        if self.config.eve_attacks(1) or self.config.eve_attacks(2):
            return analysis.detect_prob_fpp(self.config.attack.a, self.config.attack.t)
        return 0.0

    def _exact_rates(self):
        # each check sees fresh decoys, so only the attack on its own transmission counts
        return tuple(expected_fpp_detection(self.config.attack) if self.config.eve_attacks(transmission) else 0.0
                     for transmission in (1, 2))

    def run(self):
        config = self.config
        alice, bob = Party('alice', self.rng), Party('bob', self.rng)
        n_decoys = config.decoy_count

        self._enter('S1 prepare pairs')
        pairs = [Register(make_bell(FPP_REFERENCE), 'pair-{}'.format(i)) for i in range(config.n_pairs)]
        travel = QubitSequence()
        for register in pairs:
            travel.append(register, FPP_ENCODED_QUBIT, Tag.MESSAGE)

        self._enter('S2 insert decoys')
        decoys, bits = bob.prepare_ghz_decoys(n_decoys)
        sequence_d = bob.insert_decoys(travel, decoys, bits)

        self._enter('S3 first transmission')
        self._transmit(sequence_d, 1)

        self._enter('S4 first check')
        checked, detected, sequence_a = alice.check_ghz_decoys(sequence_d, bob.announce())
        if not self._check_passes(1, checked, detected):
            return self.report

        self._enter('S5 encode and second transmission')
        for (register, qubit, _), symbol in zip(sequence_a.message_entries(), self._padded_symbols(len(pairs))):
            register.state = encode_symbol(register.state, qubit, symbol)
        decoys, bits = alice.prepare_ghz_decoys(n_decoys)
        sequence = alice.insert_decoys(sequence_a, decoys, bits)
        self._transmit(sequence, 2)

        self._enter('S6 second check and decode')
        checked, detected, _ = bob.check_ghz_decoys(sequence, alice.announce())
        if not self._check_passes(2, checked, detected):
            return self.report

        decoded = []
        for register in pairs:
            kind, register.state = measure_bell_pair(register.state, 0, 1, self.rng)
            decoded.append(FPP_DECODING[kind])
        return self._finish(decoded)


class DPPRun(ProtocolRun):
    """Two-step EPR-block protocol; Alice sends both halves"""

    protocol = Protocol.DPP

    def _analytic_rate(self):
        # closed form |beta|^2; matches the exact rates only for basis-symmetric attacks
        if self.config.eve_attacks(1) or self.config.eve_attacks(2):
            return analysis.detect_prob_dpp(self.config.attack.b)
        return 0.0

    def _exact_rates(self):
        # a first-step attack leaves the home particle entangled, so it also shows in the sampling check
        attack = self.config.attack
        first_attack = attack if self.config.eve_attacks(1) else None
        second_attack = attack if self.config.eve_attacks(2) else None
        first = exact_detection_rate(Protocol.DPP, attack, 1) if first_attack is not None else 0.0
        second = 0.0
        if first_attack is not None or second_attack is not None:
            second = _dpp_sampling_error(second_attack, first_attack)
        return first, second

    def _measure(self, register, qubit, basis):
        if basis == 'Z':
            bit, register.state = measure_z(register.state, qubit, self.rng)
        else:
            bit, register.state = measure_x(register.state, qubit, self.rng)
        return bit

    def run(self):
        config = self.config
        n_sampling = decoy_count(config.n_pairs, config.control_prob)
        n_remaining = config.n_pairs + n_sampling
        n_checks = decoy_count(n_remaining, config.control_prob)

        self._enter('S1 prepare pairs')
        pairs = [Register(make_bell(DPP_REFERENCE), 'pair-{}'.format(i)) for i in range(n_remaining + n_checks)]
        sequence_s1 = QubitSequence()
        for register in pairs:
            sequence_s1.append(register, 0, Tag.MESSAGE)

        self._enter('S2 first transmission and check')
        self._transmit(sequence_s1, 1)
        # Bob picks the check photons only after receiving S1
        check_positions = sorted(int(p) for p in self.rng.choice(len(pairs), size=n_checks, replace=False))
        bases = [_BASES[int(b)] for b in self.rng.integers(0, 2, size=n_checks)]
        bob_bits = [self._measure(pairs[p], 0, basis) for p, basis in zip(check_positions, bases)]
        detected = 0
        for position, basis, bob_bit in zip(check_positions, bases, bob_bits):
            alice_bit = self._measure(pairs[position], 1, basis)
            error = int(alice_bit == bob_bit)
            detected += error
            self.report.basis_checks[basis][0] += 1
            self.report.basis_checks[basis][1] += error
        if not self._check_passes(1, n_checks, detected):
            return self.report

        self._enter('S3 encode and second transmission')
        checked_set = set(check_positions)
        remaining = [register for i, register in enumerate(pairs) if i not in checked_set]
        sampling = set(int(p) for p in self.rng.choice(len(remaining), size=n_sampling, replace=False))
        sampling_ops = {}
        symbols = iter(self._padded_symbols(config.n_pairs))
        sequence_s2 = QubitSequence()
        for index, register in enumerate(remaining):
            if index in sampling:
                symbol = int(self.rng.integers(0, 4))
                sampling_ops[index] = symbol
                sequence_s2.append(register, DPP_ENCODED_QUBIT, Tag.DECOY)
            else:
                symbol = next(symbols)
                sequence_s2.append(register, DPP_ENCODED_QUBIT, Tag.MESSAGE)
            register.state = encode_symbol(register.state, DPP_ENCODED_QUBIT, symbol)
        self._transmit(sequence_s2, 2)

        self._enter('S4 Bell measurement and sampling check')
        decoded = []
        detected = 0
        for index, register in enumerate(remaining):
            kind, register.state = measure_bell_pair(register.state, 0, 1, self.rng)
            symbol = DPP_DECODING[kind]
            if index in sampling_ops:
                detected += int(symbol != sampling_ops[index])
            else:
                decoded.append(symbol)
        if not self._check_passes(2, n_sampling, detected):
            return self.report
        return self._finish(decoded)


def run_fpp(config):
    """
    Runs the GHZ-decoy protocol once.
    :param config: ProtocolConfig
    :return: RunReport
    """
    return FPPRun(config).run()


def run_dpp(config):
    """
    Runs the two-step EPR-block protocol once.
    :param config: ProtocolConfig
    :return: RunReport
    """
    return DPPRun(config).run()


def _draw_detections(rng, distribution, count, passing):
    """Draws count outcomes from distribution; returns how many are not in passing"""
    if count == 0:
        return 0
    distribution = np.clip(np.asarray(distribution, dtype=float), 0.0, None)
    outcomes = rng.choice(distribution.size, size=count, p=distribution / distribution.sum())
    return int(np.count_nonzero(~np.isin(outcomes, list(passing))))


def estimate_detection_rate(protocol, attack, trials, seed, transmission=1):
    """
    Monte Carlo estimate of the per-check detection probability.

    Each trial is one independent check: a GHZ decoy group (FPP), a check
    photon measured in a random Z/X basis (DPP, transmission 1) or a
    sampling pair with a random operation (DPP, transmission 2).  Every
    trial's outcome is drawn from the Born distribution of the attacked
    register, which gives the same statistics as measuring it particle
    by particle.

    :param protocol: Protocol or 'dpp'/'fpp'
    :param attack: AttackParams
    :param trials: number of checks, >= 1
    :param seed: seed of the estimate
    :param transmission: 1 or 2 (only matters for DPP)
    :return: (rate, binomial standard error)
    """
    protocol = Protocol(protocol)
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)) or trials < 1:
        raise ProtocolException('trials must be an integer >= 1, got {!r}'.format(trials))
    if transmission not in (1, 2):
        raise ProtocolException('transmission must be 1 or 2, got {!r}'.format(transmission))
    if not validate_attack(attack):
        raise AttackException('attack parameters do not define a unitary: {!r}'.format(attack))
    rng = make_rng(seed)

    if protocol is Protocol.FPP:
        distribution = probabilities(attack_ghz_travel(make_ghz4(), attack), [0, 1, 2, 3])
        detections = _draw_detections(rng, distribution, trials, passing=(0, 15))

    elif transmission == 1:
        attacked = attack_qubit(make_bell(DPP_REFERENCE), 0, attack)
        z_trials = int(np.count_nonzero(rng.integers(0, 2, size=trials) == 0))
        rotated = apply_local(apply_local(attacked, 0, HADAMARD), 1, HADAMARD)
        # anti-correlated outcomes 01 and 10 pass
        detections = _draw_detections(rng, probabilities(attacked, [0, 1]), z_trials, passing=(1, 2))
        detections += _draw_detections(rng, probabilities(rotated, [0, 1]), trials - z_trials, passing=(1, 2))

    else:
        symbols = rng.integers(0, 4, size=trials)
        detections = 0
        for symbol in range(4):
            encoded = encode_symbol(make_bell(DPP_REFERENCE), DPP_ENCODED_QUBIT, symbol)
            outcome = bell_probabilities(attack_qubit(encoded, DPP_ENCODED_QUBIT, attack), 0, 1)
            distribution = [outcome[kind] for kind in DPP_DECODING]
            detections += _draw_detections(rng, distribution, int(np.count_nonzero(symbols == symbol)),
                                           passing=(symbol,))

    rate = detections / trials
    return rate, binomial_stderr(rate, trials)


def _dpp_sampling_error(attack, earlier_attack=None):
    """
    Error probability of a DPP sampling pair.  attack hits the second-step
    particle, earlier_attack the first-step one; either may be None.
    """
    pair = make_bell(DPP_REFERENCE)
    if earlier_attack is not None:
        pair = attack_qubit(pair, 0, earlier_attack)
    errors = []
    for symbol in range(4):
        encoded = encode_symbol(pair, DPP_ENCODED_QUBIT, symbol)
        if attack is not None:
            encoded = attack_qubit(encoded, DPP_ENCODED_QUBIT, attack)
        outcome = bell_probabilities(encoded, 0, 1)
        errors.append(1.0 - sum(p for kind, p in outcome.items() if DPP_DECODING[kind] == symbol))
    return float(np.mean(errors))


def exact_detection_rate(protocol, attack, transmission=1, earlier_attack=None):
    """
    Detection probability the estimator converges to, computed from the
    attacked register without sampling.

    :param earlier_attack: AttackParams Eve already applied to the
    first-step particle of a DPP pair, or None
    """
    protocol = Protocol(protocol)
    if protocol is Protocol.FPP:
        return expected_fpp_detection(attack)
    if transmission == 1:
        return 0.5 * (expected_dpp_error(attack, 'Z') + expected_dpp_error(attack, 'X'))
    return _dpp_sampling_error(attack, earlier_attack)
