"""Inputs and outputs of a protocol run"""

import numpy as np

from .channel import AttackParams
from .exceptions import ProtocolException
from .utilities import decoy_count, derive_seed, find_end_index, make_rng

# Trial index reserved for drawing a default message from the run seed
_MESSAGE_STREAM = 2 ** 32


class ProtocolConfig(object):
    """
    Simulation inputs for run_dpp / run_fpp.

    n_pairs: number of message EPR pairs (N)

    control_prob: probability c of a channel use being a check, in [0, 1)

    attack: AttackParams or None (no eavesdropper)

    eve_on_first_transmission, eve_on_second_transmission: which
    transmissions Eve attacks when attack is given

    seed: seed of the run's random stream

    message_bits: even-length list of bits, at most 2*n_pairs long; when
    None, 2*n_pairs random bits derived from seed

    abort_threshold: the run aborts when a check's detection rate is
    strictly above this value; 0 means abort on any detection
    """

    def __init__(self, n_pairs, control_prob=0.5, attack=None, eve_on_first_transmission=True,
                 eve_on_second_transmission=False, seed=0, message_bits=None, abort_threshold=0.0):
        self.n_pairs = n_pairs
        self.control_prob = control_prob
        self.attack = attack
        self.eve_on_first_transmission = bool(eve_on_first_transmission)
        self.eve_on_second_transmission = bool(eve_on_second_transmission)
        self.seed = seed
        self.message_bits = message_bits
        self.abort_threshold = abort_threshold

    def __repr__(self):
        return ('ProtocolConfig(n_pairs = %s, control_prob = %s, attack = %r, seed = %s, message_bits = %s)' %
                (self.n_pairs, self.control_prob, self.attack, self.seed, len(self.message_bits)))

    @property
    def n_pairs(self):
        return self._n_pairs

    @n_pairs.setter
    def n_pairs(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise ProtocolException('n_pairs must be an integer >= 1, got {!r}'.format(value))
        self._n_pairs = int(value)

    @property
    def control_prob(self):
        return self._control_prob

    @control_prob.setter
    def control_prob(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0.0 <= value < 1.0:
            raise ProtocolException('control_prob must be in [0, 1), got {!r}'.format(value))
        self._control_prob = float(value)

    @property
    def attack(self):
        return self._attack

    @attack.setter
    def attack(self, value):
        if value is not None and not isinstance(value, AttackParams):
            raise ProtocolException('attack must be AttackParams or None')
        self._attack = value

    @property
    def seed(self):
        return self._seed

    @seed.setter
    def seed(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ProtocolException('seed must be an integer, got {!r}'.format(value))
        self._seed = int(value) & 0xFFFFFFFFFFFFFFFF

    @property
    def message_bits(self):
        return self._message_bits

    @message_bits.setter
    def message_bits(self, bits):
        if bits is None:
            rng = make_rng(derive_seed(self.seed, _MESSAGE_STREAM))
            bits = rng.integers(0, 2, size=2 * self.n_pairs).tolist()
        bits = [int(bit) for bit in bits]
        if any(bit not in (0, 1) for bit in bits):
            raise ProtocolException('message_bits must contain only 0 and 1')
        if len(bits) % 2 != 0:
            raise ProtocolException('message_bits must have even length (2 bits per EPR pair)')
        if len(bits) > 2 * self.n_pairs:
            raise ProtocolException('{} message bits do not fit in {} EPR pairs'.format(len(bits), self.n_pairs))
        self._message_bits = bits

    @property
    def abort_threshold(self):
        return self._abort_threshold

    @abort_threshold.setter
    def abort_threshold(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
            raise ProtocolException('abort_threshold must be in [0, 1], got {!r}'.format(value))
        self._abort_threshold = float(value)

    @property
    def decoy_count(self):
        """Check groups per N message carriers: round(c*N/(1-c))"""
        return decoy_count(self.n_pairs, self.control_prob)

    def eve_attacks(self, transmission):
        """Does Eve attack transmission 1 or 2?"""
        if self.attack is None:
            return False
        if transmission == 1:
            return self.eve_on_first_transmission
        return self.eve_on_second_transmission

    def to_dict(self):
        attack = None
        if self.attack is not None:
            attack = {'a': self.attack.a, 't': self.attack.t, 'b': self.attack.b, 's': self.attack.s}
        return {'n_pairs': self.n_pairs,
                'control_prob': self.control_prob,
                'attack': attack,
                'eve_on_first_transmission': self.eve_on_first_transmission,
                'eve_on_second_transmission': self.eve_on_second_transmission,
                'seed': self.seed,
                'message_length': len(self.message_bits),
                'abort_threshold': self.abort_threshold}


class RunReport(object):
    """
    Outcome of a protocol run.

    Check counts are kept per transmission: index 0 for the check after
    the first transmission, index 1 for the check after the second.
    basis_checks holds DPP's first check split by measurement basis as
    {'Z': [checked, detections], 'X': [checked, detections]}.
    """

    def __init__(self, protocol, seed, analytic_detection_rate=0.0, exact_rates=(0.0, 0.0)):
        self.protocol = protocol
        self.seed = seed
        self.analytic_detection_rate = analytic_detection_rate
        self.exact_rates = list(exact_rates)
        self.checked = [0, 0]
        self.detected = [0, 0]
        self.basis_checks = {'Z': [0, 0], 'X': [0, 0]}
        self.aborted = False
        self.aborted_at = None
        self._recovered_bits = []
        self.bit_error_count = 0

    def __repr__(self):
        return ('RunReport(protocol = %s, decoys_checked = %s, detections = %s, aborted = %s, '
                'bit_error_count = %s)' % (self.protocol, self.decoys_checked, self.detections, self.aborted,
                                           self.bit_error_count))

    @property
    def decoys_checked(self):
        return sum(self.checked)

    @property
    def detections(self):
        return sum(self.detected)

    @property
    def empirical_detection_rate(self):
        return self.detections / max(self.decoys_checked, 1)

    @property
    def exact_detection_rate(self):
        """
        Exact per-check detection probabilities weighted by the number of
        checks each transmission got: the value empirical_detection_rate
        converges to.
        """
        if self.decoys_checked == 0:
            return 0.0
        weighted = sum(rate * checked for rate, checked in zip(self.exact_rates, self.checked))
        return weighted / self.decoys_checked

    @property
    def recovered_bits(self):
        """Bits Bob decoded; empty when the run aborted"""
        if self.aborted:
            return []
        return self._recovered_bits

    @recovered_bits.setter
    def recovered_bits(self, bits):
        self._recovered_bits = list(bits)

    def record_check(self, transmission, checked, detected):
        self.checked[transmission - 1] += checked
        self.detected[transmission - 1] += detected

    def abort(self, transmission):
        self.aborted = True
        self.aborted_at = transmission

    def to_dict(self):
        """Flat dict of the report, suitable for a CSV row or JSON object"""
        return {'protocol': self.protocol,
                'seed': self.seed,
                'decoys_checked': self.decoys_checked,
                'detections': self.detections,
                'empirical_detection_rate': self.empirical_detection_rate,
                'analytic_detection_rate': self.analytic_detection_rate,
                'exact_detection_rate': self.exact_detection_rate,
                'first_exact_rate': self.exact_rates[0],
                'second_exact_rate': self.exact_rates[1],
                'first_checked': self.checked[0],
                'first_detections': self.detected[0],
                'second_checked': self.checked[1],
                'second_detections': self.detected[1],
                'z_checked': self.basis_checks['Z'][0],
                'z_detections': self.basis_checks['Z'][1],
                'x_checked': self.basis_checks['X'][0],
                'x_detections': self.basis_checks['X'][1],
                'aborted': self.aborted,
                'aborted_at': self.aborted_at,
                'recovered_bits': ''.join(str(bit) for bit in self.recovered_bits),
                'bit_error_count': self.bit_error_count}


def load_attack_grid(data_file):
    """
    Reads an attack grid from a tab separated data file.  The grid sits
    under an ATTACK_TABLE header, followed by a column header line and one
    line per grid point; a blank line or the end of the file ends it.

    Example::

        ATTACK_TABLE
        a	t
        0.25	0.75
        0.5	0.5

    :param data_file: path of the data file
    :return: list of (a, t) tuples in file order
    """
    with open(data_file, 'r') as f:
        lines = f.read().splitlines()

    try:
        table_index = lines.index('ATTACK_TABLE')
    except ValueError:
        raise ProtocolException('{} has no ATTACK_TABLE section'.format(data_file))

    begin_index = table_index + 2
    end_index = find_end_index(begin_index, lines)
    if end_index is None:
        end_index = len(lines)

    grid = []
    for line in lines[begin_index:end_index]:
        fields = line.split()
        if len(fields) != 2:
            raise ProtocolException('attack grid line {!r} must hold exactly two values: a and t'.format(line))
        try:
            a, t = float(fields[0]), float(fields[1])
        except ValueError:
            raise ProtocolException('attack grid line {!r} holds a non-numeric value'.format(line))
        grid.append((a, t))
    if not grid:
        raise ProtocolException('{} has an empty ATTACK_TABLE'.format(data_file))
    return grid
