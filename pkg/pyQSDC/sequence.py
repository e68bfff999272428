"""Particle sequences exchanged between the parties of a protocol run"""

from enum import Enum

import numpy as np

from .channel import attack_qubit
from .exceptions import ProtocolException
from .qstate import measure_z


class Tag(Enum):
    MESSAGE = 'message'
    DECOY = 'decoy'


class Register(object):
    """
    Holder of the joint state of one group of entangled particles (an EPR
    pair or a GHZ state) together with any ancillas Eve attached to it.

    The state itself is an immutable StateVector; the register swaps in
    the new state after each operation.
    """

    def __init__(self, state, label):
        self.state = state
        self.label = label

    def __repr__(self):
        return 'Register(label = %r, num_qubits = %s)' % (self.label, self.state.num_qubits)


class QubitSequence(object):
    """
    Ordered list of (register, qubit index, tag) entries.  Tags are only
    known to the party that built the sequence; on the channel it is
    exposed through wire(), which drops them.
    """

    def __init__(self, entries=None):
        self._entries = list(entries) if entries else []

    def __repr__(self):
        return 'QubitSequence(length = %s, decoys = %s)' % (len(self), len(self.decoy_positions()))

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, position):
        return self._entries[position]

    def append(self, register, qubit, tag):
        if not isinstance(tag, Tag):
            raise ProtocolException('tag must be a Tag, got {!r}'.format(tag))
        self._entries.append((register, qubit, tag))

    def decoy_positions(self):
        return [position for position, entry in enumerate(self._entries) if entry[2] is Tag.DECOY]

    def message_entries(self):
        return [entry for entry in self._entries if entry[2] is Tag.MESSAGE]

    def with_decoys_inserted(self, decoys, rng):
        """
        Returns a new sequence with decoys' entries spread over random
        positions.  Slots are drawn by shuffling the merged tag list; self's
        entries keep their relative order, decoy entries are shuffled.
        """
        slots = np.array([False] * len(self._entries) + [True] * len(decoys))
        slots = slots[rng.permutation(slots.size)]
        shuffled = [decoys[int(i)] for i in rng.permutation(len(decoys))]
        own, inserted = iter(self._entries), iter(shuffled)
        return QubitSequence([next(inserted) if is_decoy else next(own) for is_decoy in slots])

    def without_positions(self, positions):
        """New sequence with the given positions removed, order preserved"""
        drop = set(positions)
        return QubitSequence([entry for position, entry in enumerate(self._entries) if position not in drop])

    def wire(self):
        return WireSequence(self)


class Ancilla(object):
    """
    Eve's handle on one ancilla she attached.  The register it lives in
    stays private; all she can do is measure her own qubit.
    """

    __slots__ = ('_register', '_qubit')

    def __init__(self, register, qubit):
        self._register = register
        self._qubit = qubit

    def __repr__(self):
        return 'Ancilla()'

    def measure(self, rng):
        """
        Z measurement of the ancilla; collapses the joint state.
        :param rng: numpy Generator
        :return: bit
        """
        bit, self._register.state = measure_z(self._register.state, self._qubit, rng)
        return bit


class WireParticle(object):
    """A particle in flight: it can be attacked, but carries no tag"""

    __slots__ = ('_register', '_qubit')

    def __init__(self, register, qubit):
        self._register = register
        self._qubit = qubit

    def entangle(self, params):
        """
        Applies Eve's attack with a fresh ancilla.
        :return: Ancilla handle for the qubit she keeps
        """
        self._register.state = attack_qubit(self._register.state, self._qubit, params)
        return Ancilla(self._register, self._register.state.num_qubits - 1)


class WireSequence(object):
    """Untagged view of a QubitSequence, as seen on the quantum channel"""

    def __init__(self, sequence):
        self._particles = [WireParticle(register, qubit) for register, qubit, _ in sequence]

    def __len__(self):
        return len(self._particles)

    def __iter__(self):
        return iter(self._particles)
