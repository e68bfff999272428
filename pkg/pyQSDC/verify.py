"""
One-shot acceptance runner behind ``qsdc verify``.

Each check returns a CheckResult; the closed-form functions are looked up
through the analysis module at call time so a patched implementation is
what gets checked.
"""

import logging

import numpy as np

from . import analysis
from .analysis import EncodingDistribution, Protocol
from .channel import AttackParams
from .config import ProtocolConfig
from .protocol import (DPP_DECODING, DPP_ENCODED_QUBIT, DPP_REFERENCE, FPP_DECODING, FPP_ENCODED_QUBIT,
                       FPP_REFERENCE, encode_symbol, estimate_detection_rate, run_dpp, run_fpp)
from .qstate import make_bell, measure_bell_pair
from .utilities import derive_seed, make_rng, within_three_sigma

logger = logging.getLogger(__name__)

FPP_GRID = tuple((a, t) for a in (0.0, 0.25, 0.5, 0.75, 1.0) for t in (0.0, 0.25, 0.5, 0.75, 1.0))
DPP_BETA_SQUARES = (0.0, 0.25, 0.5)


class CheckResult(object):

    def __init__(self, name, passed, detail=''):
        self.name = name
        self.passed = bool(passed)
        self.detail = detail

    def __repr__(self):
        return 'CheckResult(name = %r, passed = %s, detail = %r)' % (self.name, self.passed, self.detail)


def check_headline():
    d_dpp = analysis.solve_detection_for_info(2.0, Protocol.DPP)
    d_fpp = analysis.solve_detection_for_info(2.0, Protocol.FPP)
    passed = abs(d_dpp - 0.5) < 1e-6 and abs(d_fpp - 0.875) < 1e-6
    return CheckResult('headline', passed, 'd_DPP(I=2)={:.6f}, d_FPP(I=2)={:.6f}'.format(d_dpp, d_fpp))


def check_fpp_monte_carlo(trials, seed):
    failures = []
    for index, (a, t) in enumerate(FPP_GRID):
        rate, _ = estimate_detection_rate(Protocol.FPP, AttackParams.from_moduli(a, t), trials,
                                          derive_seed(seed, index))
        expected = analysis.detect_prob_fpp(a, t)
        if not within_three_sigma(rate, expected, trials):
            failures.append('a={} t={}: {:.6f} vs {:.6f}'.format(a, t, rate, expected))
    return CheckResult('fpp monte carlo', not failures, '; '.join(failures) or '{} grid points'.format(len(FPP_GRID)))


def check_dpp_monte_carlo(trials, seed):
    failures = []
    for index, beta_sq in enumerate(DPP_BETA_SQUARES):
        rate, _ = estimate_detection_rate(Protocol.DPP, AttackParams.flip_and_phase(beta_sq), trials,
                                          derive_seed(seed, 100 + index))
        expected = analysis.detect_prob_dpp(beta_sq)
        if not within_three_sigma(rate, expected, trials):
            failures.append('|beta|^2={}: {:.6f} vs {:.6f}'.format(beta_sq, rate, expected))
    return CheckResult('dpp monte carlo', not failures,
                       '; '.join(failures) or '{} attacks'.format(len(DPP_BETA_SQUARES)))


def check_spectrum(seed, size=20):
    rng = make_rng(derive_seed(seed, 200))
    worst = 0.0
    for _ in range(size):
        dist = EncodingDistribution(*rng.dirichlet(np.ones(4)))
        for d in rng.uniform(0.0, 1.0, size=size):
            closed = np.sort(analysis.probe_eigenvalues_closed(dist, float(d)))
            numeric = np.sort(analysis.probe_eigenvalues_numeric(dist, 1.0 - float(d)))
            worst = max(worst, float(np.max(np.abs(closed - numeric))))
    return CheckResult('probe spectrum', worst <= 1e-10, 'max deviation {:.3e}'.format(worst))


def check_entropy_identity(points=101):
    uniform = EncodingDistribution.uniform()
    worst = 0.0
    for d in np.linspace(0.0, 1.0, points):
        info = analysis.von_neumann_info(analysis.probe_eigenvalues_closed(uniform, float(d)))
        worst = max(worst, abs(info - analysis.info_gain_dpp(float(d))))
    return CheckResult('entropy identity', worst <= 1e-9, 'max deviation {:.3e}'.format(worst))


def check_dominance(targets=50):
    violations = 0
    for target in np.linspace(1.0, 2.0, targets + 1)[1:]:
        d_dpp = analysis.solve_detection_for_info(float(target), Protocol.DPP)
        d_fpp = analysis.solve_detection_for_info(float(target), Protocol.FPP)
        if d_fpp < d_dpp - 1e-9:
            violations += 1
    strict = analysis.solve_detection_for_info(2.0, Protocol.FPP) > analysis.solve_detection_for_info(2.0,
                                                                                                       Protocol.DPP)
    return CheckResult('dominance', violations == 0 and strict, '{} violations'.format(violations))


def check_geometric_series(terms=1000):
    worst = 0.0
    for c in np.linspace(0.1, 0.9, 9):
        for d in np.linspace(0.1, 0.9, 9):
            ratio = c * (1.0 - d)
            partial = (1.0 - c) * sum(ratio ** k for k in range(terms + 1))
            worst = max(worst, abs(partial - analysis.eavesdrop_success(float(c), float(d))))
    limit = analysis.eavesdrop_success_info(1e4, 0.5, 0.5)
    return CheckResult('geometric series', worst <= 1e-12 and limit < 1e-6,
                       'max deviation {:.3e}, s(1e4)={:.3e}'.format(worst, limit))


def check_protocol_runs(seed, message_length=2000):
    rng = make_rng(derive_seed(seed, 300))
    message = rng.integers(0, 2, size=message_length).tolist()
    problems = []
    for name, runner in (('fpp', run_fpp), ('dpp', run_dpp)):
        config = ProtocolConfig(message_length // 2, control_prob=0.1, seed=seed, message_bits=message)
        report = runner(config)
        if report.aborted or report.recovered_bits != message or report.detections:
            problems.append('{} run lost the message'.format(name))
        again = runner(ProtocolConfig(message_length // 2, control_prob=0.1, seed=seed, message_bits=message))
        if again.to_dict() != report.to_dict():
            problems.append('{} run is not reproducible'.format(name))
    for reference, table, qubit in ((DPP_REFERENCE, DPP_DECODING, DPP_ENCODED_QUBIT),
                                    (FPP_REFERENCE, FPP_DECODING, FPP_ENCODED_QUBIT)):
        decoding = dict(table)
        for symbol in range(4):
            kind, _ = measure_bell_pair(encode_symbol(make_bell(reference), qubit, symbol), 0, 1, rng)
            if decoding[kind] != symbol:
                problems.append('symbol {} on {} decoded as {}'.format(symbol, reference.name, decoding[kind]))
    return CheckResult('protocol runs', not problems, '; '.join(problems) or 'message recovered')


def run_acceptance(trials=100000, seed=0):
    """
    Runs every acceptance check.

    :param trials: Monte Carlo trials per attack
    :param seed: base seed
    :return: list of CheckResult
    """
    results = [check_headline(),
               check_fpp_monte_carlo(trials, seed),
               check_dpp_monte_carlo(trials, seed),
               check_spectrum(seed),
               check_entropy_identity(),
               check_dominance(),
               check_geometric_series(),
               check_protocol_runs(seed)]
    for result in results:
        logger.info('%s: %s (%s)', result.name, 'pass' if result.passed else 'FAIL', result.detail)
    return results
