"""
Exact state-vector quantum mechanics for the small registers used by
the protocols: Bell and GHZ preparation, local unitaries, tensor
composition and projective measurement in the Z, X and Bell bases.

Qubit 0 is the most significant bit of a basis index, so the amplitude
of |q0 q1 ... q(n-1)> sits at index q0*2**(n-1) + ... + q(n-1).
"""

from enum import Enum

import numpy as np

from .exceptions import StateException

NORM_TOLERANCE = 1e-12

# Measurement refuses registers whose norm drifted further than this
_MEASURE_TOLERANCE = 1e-9


class BellKind(Enum):
    """The four Bell states"""
    PSI_MINUS = 0
    PSI_PLUS = 1
    PHI_MINUS = 2
    PHI_PLUS = 3


class LocalUnitary(object):
    """A 2x2 unitary acting on a single qubit"""

    def __init__(self, entries, name='U'):
        matrix = np.array(entries, dtype=complex)
        if matrix.shape != (2, 2):
            raise StateException('a local unitary must be 2x2, got shape {}'.format(matrix.shape))
        if not np.all(np.isfinite(matrix)):
            raise StateException('local unitary entries must be finite')
        if not np.allclose(matrix.conj().T @ matrix, np.eye(2), rtol=0, atol=NORM_TOLERANCE):
            raise StateException('{} is not unitary'.format(name))
        matrix.setflags(write=False)
        self._matrix = matrix
        self.name = name

    def __repr__(self):
        return 'LocalUnitary(name = %r, entries = %s)' % (self.name, self._matrix.tolist())

    @property
    def matrix(self):
        return self._matrix

    def dagger(self):
        return LocalUnitary(self._matrix.conj().T, name=self.name + '^dagger')


# Dense coding operations
U0 = LocalUnitary([[1, 0], [0, 1]], name='U0')
U1 = LocalUnitary([[1, 0], [0, -1]], name='U1')
U2 = LocalUnitary([[0, 1], [1, 0]], name='U2')
U3 = LocalUnitary([[0, -1], [1, 0]], name='U3')
DENSE_CODING_UNITARIES = (U0, U1, U2, U3)

HADAMARD = LocalUnitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2), name='H')

CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)


class StateVector(object):
    """
    Normalized amplitude vector over a register of num_qubits qubits.

    Instances are immutable: every operation in this module returns a
    new StateVector.
    """

    def __init__(self, amplitudes):
        vector = np.array(amplitudes, dtype=complex).reshape(-1)
        length = vector.size
        if length < 2 or (length & (length - 1)) != 0:
            raise StateException('amplitude count must be a power of 2 (>= 2), got {}'.format(length))
        if not np.all(np.isfinite(vector)):
            raise StateException('amplitudes must be finite')
        norm_sq = float(np.vdot(vector, vector).real)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise StateException('state is not normalized: sum of |amplitude|^2 = {!r}'.format(norm_sq))
        vector.setflags(write=False)
        self._amplitudes = vector
        self._num_qubits = length.bit_length() - 1

    def __repr__(self):
        terms = ['({:.6g})|{}>'.format(amp, format(index, '0{}b'.format(self._num_qubits)))
                 for index, amp in enumerate(self._amplitudes) if abs(amp) > 1e-9]
        return 'StateVector(num_qubits = %s, terms = %s)' % (self._num_qubits, ' + '.join(terms))

    def __len__(self):
        return self._amplitudes.size

    @property
    def num_qubits(self):
        return self._num_qubits

    @property
    def amplitudes(self):
        """Read-only view of the amplitude array"""
        return self._amplitudes

    def norm(self):
        return float(np.linalg.norm(self._amplitudes))

    def _tensor(self):
        return self._amplitudes.reshape((2,) * self._num_qubits)

    def _check_qubit(self, qubit):
        if isinstance(qubit, bool) or not isinstance(qubit, (int, np.integer)):
            raise StateException('qubit index must be an integer, got {!r}'.format(qubit))
        if qubit < 0 or qubit >= self._num_qubits:
            raise StateException('qubit {} out of range for a {}-qubit register'.format(qubit, self._num_qubits))

    @classmethod
    def _from_tensor(cls, tensor):
        """Builds a StateVector from an unnormalized tensor, renormalizing it"""
        vector = np.asarray(tensor, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm < 1e-150:
            raise StateException('norm underflow')
        return cls(vector / norm)


def basis_state(bits):
    """
    Computational basis state |bits>.
    :param bits: string such as '0110' or sequence of 0/1
    :return: StateVector
    """
    bits = [int(b) for b in bits]
    if not bits or any(b not in (0, 1) for b in bits):
        raise StateException('basis state needs a non-empty sequence of bits')
    index = int(''.join(str(b) for b in bits), 2)
    vector = np.zeros(2 ** len(bits), dtype=complex)
    vector[index] = 1.0
    return StateVector(vector)


def plus_state():
    """|+> = (|0> + |1>)/sqrt(2)"""
    return StateVector(np.array([1, 1]) / np.sqrt(2))


def make_bell(kind):
    """
    Two-qubit Bell state of the given kind.

    :param kind: BellKind
    :return: StateVector over basis (00, 01, 10, 11)
    """
    h = 1 / np.sqrt(2)
    table = {BellKind.PSI_MINUS: [0, h, -h, 0],
             BellKind.PSI_PLUS: [0, h, h, 0],
             BellKind.PHI_MINUS: [h, 0, 0, -h],
             BellKind.PHI_PLUS: [h, 0, 0, h]}
    if kind not in table:
        raise StateException('unknown Bell state {!r}'.format(kind))
    return StateVector(table[kind])


def make_ghz4():
    """Four-particle GHZ state (|0000> + |1111>)/sqrt(2)"""
    vector = np.zeros(16, dtype=complex)
    vector[0] = vector[15] = 1 / np.sqrt(2)
    return StateVector(vector)


def tensor(a, b):
    """Kronecker product a (x) b; a's qubits come first"""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def apply_local(state, qubit, u):
    """
    Applies a single-qubit unitary to one qubit of the register.

    :param state: StateVector
    :param qubit: index of the target qubit
    :param u: LocalUnitary
    :return: new StateVector (I x ... x u x ... x I)|state>
    """
    state._check_qubit(qubit)
    matrix = u.matrix if isinstance(u, LocalUnitary) else LocalUnitary(u).matrix
    psi = np.tensordot(matrix, state._tensor(), axes=([1], [qubit]))
    psi = np.moveaxis(psi, 0, qubit)
    return StateVector(psi.reshape(-1))


def apply_two_local(state, q1, q2, u4):
    """
    Applies a 4x4 unitary to the ordered qubit pair (q1, q2); u4 is
    written in the basis |q1 q2> with q1 the more significant bit.
    """
    state._check_qubit(q1)
    state._check_qubit(q2)
    if q1 == q2:
        raise StateException('a two-qubit gate needs two distinct qubits')
    matrix = np.asarray(u4, dtype=complex)
    if matrix.shape != (4, 4):
        raise StateException('two-qubit gate must be 4x4, got shape {}'.format(matrix.shape))
    if not np.allclose(matrix.conj().T @ matrix, np.eye(4), rtol=0, atol=1e-10):
        raise StateException('two-qubit gate is not unitary')
    psi = np.tensordot(matrix.reshape(2, 2, 2, 2), state._tensor(), axes=([2, 3], [q1, q2]))
    psi = np.moveaxis(psi, [0, 1], [q1, q2])
    return StateVector(psi.reshape(-1))


def inner(a, b):
    """<a|b>"""
    if a.num_qubits != b.num_qubits:
        raise StateException('registers differ in size: {} vs {}'.format(a.num_qubits, b.num_qubits))
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a, b):
    """Phase-insensitive overlap |<a|b>|"""
    return abs(inner(a, b))


def probabilities(state, qubits):
    """
    Born distribution of a Z-basis measurement of the listed qubits, the
    rest of the register traced out.

    :param state: StateVector
    :param qubits: ordered qubit indices; qubits[0] is the most significant
    bit of the returned index
    :return: numpy array of length 2**len(qubits)
    """
    qubits = list(qubits)
    for qubit in qubits:
        state._check_qubit(qubit)
    if len(set(qubits)) != len(qubits):
        raise StateException('qubits must be distinct')
    weights = np.abs(state._tensor()) ** 2
    others = tuple(q for q in range(state.num_qubits) if q not in qubits)
    marginal = weights.sum(axis=others) if others else weights
    # after summing, remaining axes are in ascending qubit order
    order = sorted(qubits)
    marginal = np.transpose(marginal, [order.index(q) for q in qubits])
    return marginal.reshape(-1)


def measure_z(state, qubit, rng):
    """
    Projective Z-basis measurement of one qubit.

    :param state: StateVector
    :param qubit: qubit index
    :param rng: numpy Generator owned by the caller
    :return: (bit, collapsed StateVector); the collapsed register keeps
    every qubit, with the measured one pinned to |bit>
    """
    state._check_qubit(qubit)
    psi = state._tensor()
    total = float(np.sum(np.abs(psi) ** 2))
    if abs(total - 1.0) > _MEASURE_TOLERANCE:
        raise StateException('norm underflow: register norm^2 is {!r}'.format(total))
    p_one = float(np.sum(np.abs(np.take(psi, 1, axis=qubit)) ** 2))
    bit = 1 if rng.random() < p_one else 0
    collapsed = np.array(psi)
    index = [slice(None)] * state.num_qubits
    index[qubit] = 1 - bit
    collapsed[tuple(index)] = 0
    return bit, StateVector._from_tensor(collapsed)


def measure_x(state, qubit, rng):
    """
    Projective measurement in the {|+>, |->} basis; bit 0 means |+>.
    """
    rotated = apply_local(state, qubit, HADAMARD)
    bit, collapsed = measure_z(rotated, qubit, rng)
    return bit, apply_local(collapsed, qubit, HADAMARD)


# Outcome of the (CNOT, H) rotation -> Bell state it came from
_BELL_FROM_BITS = {(0, 0): BellKind.PHI_PLUS,
                   (1, 0): BellKind.PHI_MINUS,
                   (0, 1): BellKind.PSI_PLUS,
                   (1, 1): BellKind.PSI_MINUS}


def _to_bell_frame(state, q1, q2):
    rotated = apply_two_local(state, q1, q2, CNOT)
    return apply_local(rotated, q1, HADAMARD)


def _from_bell_frame(state, q1, q2):
    rotated = apply_local(state, q1, HADAMARD)
    return apply_two_local(rotated, q1, q2, CNOT)


def bell_probabilities(state, q1, q2):
    """
    Probability of each Bell outcome when the pair (q1, q2) is measured
    in the Bell basis.
    :return: dict of BellKind -> probability
    """
    distribution = probabilities(_to_bell_frame(state, q1, q2), [q1, q2])
    return {kind: float(distribution[2 * bits[0] + bits[1]]) for bits, kind in _BELL_FROM_BITS.items()}


def measure_bell_pair(state, q1, q2, rng):
    """
    Bell-basis measurement of the pair (q1, q2).

    :param state: StateVector
    :param q1: first qubit of the pair
    :param q2: second qubit of the pair
    :param rng: numpy Generator owned by the caller
    :return: (BellKind, collapsed StateVector)
    """
    if q1 == q2:
        raise StateException('Bell measurement needs two distinct qubits')
    rotated = _to_bell_frame(state, q1, q2)
    b1, rotated = measure_z(rotated, q1, rng)
    b2, rotated = measure_z(rotated, q2, rng)
    return _BELL_FROM_BITS[(b1, b2)], _from_bell_frame(rotated, q1, q2)
