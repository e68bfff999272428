"""
Closed-form security analysis: detection probabilities of the EPR-block
(DPP) and GHZ-decoy (FPP) checks, the spectrum and von Neumann entropy
of Eve's probe, information gain as a function of detection
probability, and the probability of eavesdropping successfully over
many runs.

Throughout, d in the probe spectrum is identified with |beta|^2, so
|alpha|^2 |beta|^2 = d - d^2.
"""

import logging
from enum import Enum

import numpy as np
from scipy.linalg import eigvalsh
from scipy.optimize import bisect

from .exceptions import DomainException
from .utilities import check_probability

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = 1e-9
ROOT_MAX_ITERATIONS = 200
EIGENVALUE_FLOOR = -1e-10

# Upper ends of the increasing branch of I(d)
DPP_FULL_INFO_DETECTION = 0.5
FPP_FULL_INFO_DETECTION = 0.875


class Protocol(Enum):
    DPP = 'dpp'
    FPP = 'fpp'


class CurveKind(Enum):
    """
    INFO_VS_DETECTION ('fig2', alias 'info-detection'): columns d,
    info_dpp, info_fpp, info_ping_pong

    SUCCESS_VS_INFO ('fig3', alias 'success'): columns info, then
    s(I, c, d) for each requested d
    """
    INFO_VS_DETECTION = 'fig2'
    SUCCESS_VS_INFO = 'fig3'

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.strip().lower()
            key = CURVE_ALIASES.get(key, key)
            for member in cls:
                if member.value == key:
                    return member
        return None


CURVE_ALIASES = {'info-detection': 'fig2', 'success': 'fig3'}


class EncodingDistribution(object):
    """Probabilities with which Alice applies U0, U1, U2, U3"""

    def __init__(self, p0, p1, p2, p3):
        probs = [check_probability(p, name) for p, name in ((p0, 'p0'), (p1, 'p1'), (p2, 'p2'), (p3, 'p3'))]
        if abs(sum(probs) - 1.0) > 1e-12:
            raise DomainException('encoding probabilities must sum to 1, got {!r}'.format(sum(probs)))
        self.p0, self.p1, self.p2, self.p3 = probs

    def __repr__(self):
        return 'EncodingDistribution(%s, %s, %s, %s)' % (self.p0, self.p1, self.p2, self.p3)

    @classmethod
    def uniform(cls):
        return cls(0.25, 0.25, 0.25, 0.25)

    def as_tuple(self):
        return self.p0, self.p1, self.p2, self.p3


class DensityMatrix(object):
    """Hermitian, positive semi-definite, unit-trace matrix"""

    def __init__(self, entries):
        matrix = np.array(entries, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DomainException('density matrix must be square, got shape {}'.format(matrix.shape))
        if not np.allclose(matrix, matrix.conj().T, rtol=0, atol=1e-12):
            raise DomainException('density matrix is not Hermitian')
        if abs(np.trace(matrix) - 1.0) > 1e-12:
            raise DomainException('density matrix trace is {!r}, not 1'.format(np.trace(matrix)))
        if eigvalsh(matrix)[0] < EIGENVALUE_FLOOR:
            raise DomainException('density matrix has a negative eigenvalue')
        matrix.setflags(write=False)
        self._entries = matrix

    def __repr__(self):
        return 'DensityMatrix(dim = %s)' % self.dim

    @property
    def dim(self):
        return self._entries.shape[0]

    @property
    def entries(self):
        return self._entries

    def eigenvalues(self):
        """Numerical spectrum, ascending"""
        return eigvalsh(self._entries)

    def von_neumann_entropy(self):
        return von_neumann_info(self.eigenvalues())


def binary_entropy(x):
    """
    H(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
    """
    x = check_probability(x, 'x')
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def no_detection_prob_fpp(a, t):
    """
    Probability a GHZ decoy group passes the check under an attack with
    |alpha|^2 = a and |n|^2 = t: (a^3 + t^3)/2.
    """
    a = check_probability(a, 'a')
    t = check_probability(t, 't')
    return 0.5 * (a ** 3 + t ** 3)


def detect_prob_fpp(a, t):
    """Lower bound of the FPP detection probability, 1 - (a^3 + t^3)/2"""
    return 1.0 - no_detection_prob_fpp(a, t)


def detect_prob_dpp(beta_sq):
    """DPP check efficiency d = |beta|^2"""
    return check_probability(beta_sq, 'beta_sq')


def probe_density_matrix(dist, alpha_sq):
    """
    Eve's probe after Alice's encoding, in the orthogonal basis
    {|0,e00>, |1,e01>, |1,e00>, |0,e01>}.  alpha*beta^* is taken real
    and nonnegative; the spectrum only depends on its modulus.

    :param dist: EncodingDistribution
    :param alpha_sq: |alpha|^2
    :return: 4x4 DensityMatrix
    """
    alpha_sq = check_probability(alpha_sq, 'alpha_sq')
    beta_sq = 1.0 - alpha_sq
    cross = np.sqrt(alpha_sq * beta_sq)
    p0, p1, p2, p3 = dist.as_tuple()
    entries = np.zeros((4, 4))
    entries[0, 0] = (p0 + p3) * alpha_sq
    entries[1, 1] = (p0 + p3) * beta_sq
    entries[0, 1] = entries[1, 0] = (p0 - p3) * cross
    entries[2, 2] = (p1 + p2) * alpha_sq
    entries[3, 3] = (p1 + p2) * beta_sq
    entries[2, 3] = entries[3, 2] = (p1 - p2) * cross
    return DensityMatrix(entries)


def _block_eigenvalues(p_first, p_second, d):
    # (p+q)^2 - 16pq(d-d^2) rewritten as (p-q)^2 + 4pq(1-2d)^2, which has no cancellation near d = 0.5
    weight = p_first + p_second
    radicand = (p_first - p_second) ** 2 + 4.0 * p_first * p_second * (1.0 - 2.0 * d) ** 2
    root = np.sqrt(radicand)
    return 0.5 * weight + 0.5 * root, 0.5 * weight - 0.5 * root


def probe_eigenvalues_closed(dist, d):
    """
    Closed-form eigenvalues of the probe density matrix.

    :param dist: EncodingDistribution
    :param d: detection probability, identified with |beta|^2
    :return: (lambda0, lambda1, lambda2, lambda3)
    """
    d = check_probability(d, 'd')
    p0, p1, p2, p3 = dist.as_tuple()
    lambda0, lambda1 = _block_eigenvalues(p0, p3, d)
    lambda2, lambda3 = _block_eigenvalues(p1, p2, d)
    return lambda0, lambda1, lambda2, lambda3


def probe_eigenvalues_numeric(dist, alpha_sq):
    """Ascending spectrum of probe_density_matrix from scipy's eigvalsh"""
    return probe_density_matrix(dist, alpha_sq).eigenvalues()


def von_neumann_info(eigenvalues):
    """
    -sum(lambda log2 lambda) over a spectrum; eigenvalues in
    [-1e-10, 0) are clamped to 0.
    """
    values = np.asarray(eigenvalues, dtype=float)
    if values.size == 0:
        raise DomainException('empty spectrum')
    if np.any(values < EIGENVALUE_FLOOR):
        raise DomainException('eigenvalue below {}: {}'.format(EIGENVALUE_FLOOR, values.min()))
    if abs(values.sum() - 1.0) > 1e-9:
        raise DomainException('eigenvalues must sum to 1, got {!r}'.format(values.sum()))
    values = np.clip(values, 0.0, None)
    positive = values[values > 0]
    return float(-np.sum(positive * np.log2(positive)))


def info_gain_conditional(d):
    """
    Information Eve gains on one branch (Bob's travel qubit in |0> or in
    |1>, which give the same value) under uniform encoding: the entropy
    of the spectrum (d/2, (1-d)/2, d/2, (1-d)/2).
    """
    d = check_probability(d, 'd')
    return von_neumann_info([0.5 * d, 0.5 * (1.0 - d), 0.5 * d, 0.5 * (1.0 - d)])


def info_gain_general(dist, d):
    """von Neumann information of the probe for any encoding distribution"""
    return von_neumann_info(probe_eigenvalues_closed(dist, d))


def info_gain_dpp(d):
    """Maximal information per pair at DPP detection probability d: 1 + H(d)"""
    return 1.0 + binary_entropy(d)


def info_gain_fpp(d):
    """Maximal information per pair at FPP detection probability d: 1 + H(cbrt(1-d))"""
    d = check_probability(d, 'd')
    return 1.0 + binary_entropy(min(float(np.cbrt(1.0 - d)), 1.0))


def ping_pong_info(d):
    """Reference curve of the original ping-pong protocol, H(d)"""
    return binary_entropy(d)


def solve_detection_for_info(target_info, protocol):
    """
    Detection probability at which Eve's information gain reaches
    target_info, on the increasing branch of I(d): d in [0, 0.5] for DPP
    and d in [0, 0.875] for FPP.  Bracketed bisection.

    :param target_info: bits per pair, in (1, 2]
    :param protocol: Protocol
    :return: d
    """
    protocol = Protocol(protocol)
    if isinstance(target_info, bool) or not isinstance(target_info, (int, float)) or \
            not 1.0 < target_info <= 2.0:
        raise DomainException('target_info must be in (1, 2], got {!r}'.format(target_info))

    if protocol is Protocol.DPP:
        info_gain, upper = info_gain_dpp, DPP_FULL_INFO_DETECTION
    else:
        info_gain, upper = info_gain_fpp, FPP_FULL_INFO_DETECTION

    def residual(d):
        return info_gain(d) - target_info

    if abs(residual(upper)) <= 1e-12:
        return upper
    root = bisect(residual, 0.0, upper, xtol=ROOT_TOLERANCE, maxiter=ROOT_MAX_ITERATIONS)
    logger.debug('I(d) = %s reached at d = %s (%s)', target_info, root, protocol.value)
    return float(root)


def eavesdrop_success(c, d):
    """
    Probability that Eve eavesdrops one message transfer undetected when
    a fraction c of runs are control runs: (1-c) / (1 - c(1-d)).
    """
    c = check_probability(c, 'c')
    d = check_probability(d, 'd')
    if c == 1.0:
        raise DomainException('c must be < 1')
    return (1.0 - c) / (1.0 - c * (1.0 - d))


def eavesdrop_success_info(info, c, d):
    """
    Probability of eavesdropping info bits without being detected,
    s(c, d) ** (info / I(d)) with I(d) the FPP information gain.
    """
    if isinstance(info, bool) or not isinstance(info, (int, float)) or not info >= 0 or not np.isfinite(info):
        raise DomainException('info must be a finite number >= 0, got {!r}'.format(info))
    base = eavesdrop_success(c, d)
    if base == 1.0:
        return 1.0
    return float(base ** (info / info_gain_fpp(d)))


def transmission_rate(c):
    """Message transfers per protocol run, 1 - c"""
    c = check_probability(c, 'c')
    if c == 1.0:
        raise DomainException('c must be < 1')
    return 1.0 - c


class CurveTable(object):
    """In-memory table: a header and rows of floats"""

    def __init__(self, kind, header, rows):
        self.kind = kind
        self.header = list(header)
        self.rows = [list(row) for row in rows]

    def __repr__(self):
        return 'CurveTable(kind = %s, columns = %s, rows = %s)' % (self.kind.value, len(self.header), len(self.rows))

    def column(self, name):
        index = self.header.index(name)
        return [row[index] for row in self.rows]


DEFAULT_SUCCESS_DETECTIONS = (0.2, 0.4, 0.5, 0.6, 0.8)


def emit_curves(kind, points=101, d_values=DEFAULT_SUCCESS_DETECTIONS, c=0.5, info_max=20.0):
    """
    Tabulates the information/detection or success/information curves.

    :param kind: CurveKind
    :param points: grid resolution, >= 2
    :param d_values: detection probabilities, one column each (SUCCESS_VS_INFO)
    :param c: control mode probability (SUCCESS_VS_INFO)
    :param info_max: upper end of the information axis (SUCCESS_VS_INFO)
    :return: CurveTable
    """
    kind = CurveKind(kind)
    if isinstance(points, bool) or not isinstance(points, (int, np.integer)) or points < 2:
        raise DomainException('points must be an integer >= 2, got {!r}'.format(points))

    if kind is CurveKind.INFO_VS_DETECTION:
        header = ['d', 'info_dpp', 'info_fpp', 'info_ping_pong']
        rows = [[d, info_gain_dpp(d), info_gain_fpp(d), ping_pong_info(d)]
                for d in (float(x) for x in np.linspace(0.0, 1.0, points))]
        return CurveTable(kind, header, rows)

    if not d_values:
        raise DomainException('at least one detection probability is needed')
    header = ['info'] + ['s_d{:g}'.format(d) for d in d_values]
    rows = []
    for info in (float(x) for x in np.linspace(0.0, info_max, points)):
        rows.append([info] + [eavesdrop_success_info(info, c, d) for d in d_values])
    return CurveTable(kind, header, rows)
