"""
Eve's attack model: an entangling unitary E acting on each travel qubit
together with a fresh ancilla qubit,

    E|0>|x> = alpha|0>|x0> + beta|1>|x1>
    E|1>|x> = m|0>|y0> + n|1>|y1>

with the initial ancilla |x> fixed to |0>.
"""

import logging

import numpy as np
from scipy.linalg import null_space

from .exceptions import AttackException
from .qstate import (HADAMARD, StateVector, apply_local, apply_two_local, basis_state, make_bell, make_ghz4,
                     probabilities, tensor, BellKind)

logger = logging.getLogger(__name__)

UNITARITY_TOLERANCE = 1e-10


class AttackParams(object):
    """
    Amplitudes (alpha, beta, m, n) of Eve's attack plus the post-attack
    ancilla states |x0>, |x1>, |y0>, |y1>.

    When no ancillas are given, |x0> = |x1> = |0> and |y0> = |y1> = |1>;
    with that choice E is unitary for every choice of amplitudes.
    """

    def __init__(self, alpha, beta, m, n, ancilla_x0=None, ancilla_x1=None, ancilla_y0=None, ancilla_y1=None):
        amplitudes = []
        for name, value in (('alpha', alpha), ('beta', beta), ('m', m), ('n', n)):
            try:
                value = complex(value)
            except (TypeError, ValueError):
                raise AttackException('{} must be a complex number, got {!r}'.format(name, value))
            if not np.isfinite(value.real) or not np.isfinite(value.imag):
                raise AttackException('{} must be finite'.format(name))
            amplitudes.append(value)
        self._alpha, self._beta, self._m, self._n = amplitudes

        if abs(self.a + self.b - 1.0) > 1e-12:
            raise AttackException('|alpha|^2 + |beta|^2 must be 1, got {!r}'.format(self.a + self.b))
        if abs(self.s + self.t - 1.0) > 1e-12:
            raise AttackException('|m|^2 + |n|^2 must be 1, got {!r}'.format(self.s + self.t))

        defaults = (basis_state('0'), basis_state('0'), basis_state('1'), basis_state('1'))
        ancillas = []
        for name, ancilla, default in zip(('x0', 'x1', 'y0', 'y1'),
                                          (ancilla_x0, ancilla_x1, ancilla_y0, ancilla_y1), defaults):
            if ancilla is None:
                ancilla = default
            if not isinstance(ancilla, StateVector) or ancilla.num_qubits != 1:
                raise AttackException('ancilla {} must be a single-qubit StateVector'.format(name))
            ancillas.append(ancilla)
        self._ancillas = tuple(ancillas)
        self._unitary = None

    def __repr__(self):
        return 'AttackParams(alpha = %s, beta = %s, m = %s, n = %s)' % (self._alpha, self._beta, self._m, self._n)

    @classmethod
    def identity(cls):
        """Eve leaves the qubit alone; the ancilla stays |0>"""
        zero = basis_state('0')
        return cls(1, 0, 0, 1, zero, zero, zero, zero)

    @classmethod
    def from_moduli(cls, a, t):
        """
        Real amplitudes alpha = sqrt(a), beta = sqrt(1-a), m = sqrt(1-t),
        n = sqrt(t) with the default ancilla states.
        """
        for name, value in (('a', a), ('t', t)):
            if not 0.0 <= value <= 1.0:
                raise AttackException('{} must be in [0, 1], got {}'.format(name, value))
        return cls(np.sqrt(a), np.sqrt(1.0 - a), np.sqrt(1.0 - t), np.sqrt(t))

    @classmethod
    def flip_and_phase(cls, beta_sq):
        """
        |0> -> alpha|0,0> + beta|1,1>,  |1> -> -beta|0,1> + alpha|1,0>.

        The ancilla records whether -i*sigma_y was applied, so Z- and
        X-basis checks each see an error with probability beta_sq.
        """
        if not 0.0 <= beta_sq <= 1.0:
            raise AttackException('beta_sq must be in [0, 1], got {}'.format(beta_sq))
        alpha, beta = np.sqrt(1.0 - beta_sq), np.sqrt(beta_sq)
        zero, one = basis_state('0'), basis_state('1')
        return cls(alpha, beta, -beta, alpha, zero, one, one, zero)

    @property
    def alpha(self):
        return self._alpha

    @property
    def beta(self):
        return self._beta

    @property
    def m(self):
        return self._m

    @property
    def n(self):
        return self._n

    @property
    def a(self):
        """|alpha|^2"""
        return min(abs(self._alpha) ** 2, 1.0)

    @property
    def b(self):
        """|beta|^2"""
        return min(abs(self._beta) ** 2, 1.0)

    @property
    def s(self):
        """|m|^2"""
        return min(abs(self._m) ** 2, 1.0)

    @property
    def t(self):
        """|n|^2"""
        return min(abs(self._n) ** 2, 1.0)

    @property
    def ancillas(self):
        """(|x0>, |x1>, |y0>, |y1>)"""
        return self._ancillas

    def image_vectors(self):
        """
        E|0,0> and E|1,0> as length-4 arrays over |qubit, ancilla>.
        """
        x0, x1, y0, y1 = (anc.amplitudes for anc in self._ancillas)
        zero, one = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
        v0 = self._alpha * np.kron(zero, x0) + self._beta * np.kron(one, x1)
        v1 = self._m * np.kron(zero, y0) + self._n * np.kron(one, y1)
        return v0, v1

    @property
    def unitary(self):
        """Cached completion of E to a 4x4 unitary; see attack_unitary"""
        if self._unitary is None:
            self._unitary = attack_unitary(self)
        return self._unitary


def validate_attack(p):
    """
    True iff the images of |0,0> and |1,0> under E are orthonormal, so E
    extends to a unitary on qubit (x) ancilla.

    :param p: AttackParams
    :return: Boolean
    """
    v0, v1 = p.image_vectors()
    gram = np.array([[np.vdot(v0, v0), np.vdot(v0, v1)],
                     [np.vdot(v1, v0), np.vdot(v1, v1)]])
    return bool(np.allclose(gram, np.eye(2), rtol=0, atol=UNITARITY_TOLERANCE))


def attack_unitary(p):
    """
    4x4 unitary in the basis |qubit, ancilla> whose columns for inputs
    |0,0> and |1,0> are the images fixed by p; the two remaining columns
    are an orthonormal basis of the complement.
    """
    if not validate_attack(p):
        raise AttackException('attack parameters do not define a unitary: {!r}'.format(p))
    v0, v1 = p.image_vectors()
    images = np.column_stack([v0, v1])
    complement = null_space(images.conj().T)
    unitary = np.empty((4, 4), dtype=complex)
    unitary[:, 0] = v0
    unitary[:, 2] = v1
    unitary[:, 1] = complement[:, 0]
    unitary[:, 3] = complement[:, 1]
    return unitary


def attack_qubit(state, qubit, p):
    """
    Appends a fresh ancilla |0> to the register and applies E to
    (qubit, ancilla).  The ancilla becomes the last qubit of the result.

    :param state: StateVector
    :param qubit: index of the attacked qubit
    :param p: AttackParams
    :return: StateVector with one more qubit
    """
    unitary = p.unitary
    extended = tensor(state, basis_state('0'))
    return apply_two_local(extended, qubit, extended.num_qubits - 1, unitary)


def attack_ghz_travel(ghz, p):
    """
    I (x) E (x) E (x) E on a four-particle GHZ register: particles 2, 3
    and 4 (indices 1, 2, 3) each get their own ancilla (indices 4, 5, 6).
    """
    if ghz.num_qubits != 4:
        raise AttackException('expected a 4-qubit GHZ register, got {} qubits'.format(ghz.num_qubits))
    state = ghz
    for particle in (1, 2, 3):
        state = attack_qubit(state, particle, p)
    return state


def expected_fpp_detection(p):
    """
    Exact probability that a GHZ decoy group travelling past Eve fails
    the check, i.e. particles 2-4 do not all agree with particle 1.
    """
    distribution = probabilities(attack_ghz_travel(make_ghz4(), p), [0, 1, 2, 3])
    return float(1.0 - distribution[0] - distribution[15])


def expected_dpp_error(p, basis='Z'):
    """
    Exact error rate of a DPP check photon: Eve attacks the first particle
    of |psi->, both particles are measured in basis 'Z' or 'X', and an
    error is any outcome that is not anti-correlated.
    """
    if basis not in ('Z', 'X'):
        raise AttackException("basis must be 'Z' or 'X', got {!r}".format(basis))
    state = attack_qubit(make_bell(BellKind.PSI_MINUS), 0, p)
    if basis == 'X':
        state = apply_local(apply_local(state, 0, HADAMARD), 1, HADAMARD)
    distribution = probabilities(state, [0, 1])
    return float(distribution[0] + distribution[3])


class Eavesdropper(object):
    """
    Eve's role in a protocol run.  She sees each transmission only as an
    untagged wire of particles and applies the same attack to every one
    of them, keeping her ancillas.
    """

    def __init__(self, params):
        if not validate_attack(params):
            raise AttackException('attack parameters do not define a unitary: {!r}'.format(params))
        self.params = params
        self.probes = []
        self.transmissions_seen = 0

    def __repr__(self):
        return 'Eavesdropper(params = %r, probes = %s)' % (self.params, len(self.probes))

    def intercept(self, wire):
        """
        Attacks every particle on the wire.
        :param wire: WireSequence
        :return: None
        """
        for particle in wire:
            self.probes.append(particle.entangle(self.params))
        self.transmissions_seen += 1
        logger.debug('attacked %s particles in transmission %s', len(wire), self.transmissions_seen)
