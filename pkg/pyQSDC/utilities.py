"""Helpers shared by the protocol runner and the command line front end"""

import numpy as np

from .exceptions import DomainException, ProtocolException


def find_end_index(start_index, lines):
    """
    Given a start index and lines of data, finds the first line that
    contains only '' and returns the index for that line.
    """
    end_index = None
    for line in lines[start_index:]:
        if line == '':
            end_index = lines.index(line, start_index)
            break
    return end_index


def check_probability(value, name='value'):
    """
    Raises DomainException unless value is a real number in [0, 1].
    :param value: number to check
    :param name: name used in the error message
    :return: value as a float
    """
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
        raise DomainException('{} must be a real number, got {!r}'.format(name, value))
    value = float(value)
    if not np.isfinite(value) or value < 0.0 or value > 1.0:
        raise DomainException('{} must be in [0, 1], got {}'.format(name, value))
    return value


def decoy_count(n_pairs, control_prob):
    """
    Number of check groups accompanying n_pairs message carriers when a
    fraction control_prob of the channel uses are checks:
    round(c*N/(1-c)), with a minimum of 1 whenever c > 0.

    :param n_pairs: number of message carriers (N)
    :param control_prob: control mode probability c in [0, 1)
    :return: integer number of decoys
    """
    if control_prob < 0 or control_prob >= 1:
        raise ProtocolException('control_prob must be in [0, 1), got {}'.format(control_prob))
    if control_prob == 0:
        return 0
    count = int(round(control_prob * n_pairs / (1.0 - control_prob)))
    return max(count, 1)


def derive_seed(seed, index):
    """
    Seed for the index-th independent trial of a run seeded with seed.
    The mixing function is numpy's SeedSequence over the pair (seed, index),
    so results do not depend on the order trials are scheduled in.
    """
    sequence = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed):
    """numpy Generator for seed"""
    return np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)


def bits_to_symbols(bits):
    """
    Pairs up a bit list into 2-bit symbols: [b0, b1, b2, b3] -> [2*b0+b1, 2*b2+b3]
    """
    if len(bits) % 2 != 0:
        raise ProtocolException('message must contain an even number of bits')
    return [2 * int(bits[i]) + int(bits[i + 1]) for i in range(0, len(bits), 2)]


def symbols_to_bits(symbols):
    """Inverse of bits_to_symbols"""
    bits = []
    for symbol in symbols:
        bits.extend([(symbol >> 1) & 1, symbol & 1])
    return bits


def binomial_stderr(rate, trials):
    """Standard error of an empirical frequency over trials Bernoulli draws"""
    if trials < 1:
        return 0.0
    return float(np.sqrt(rate * (1.0 - rate) / trials))


def within_three_sigma(empirical, expected, trials):
    """
    True when an empirical frequency over trials draws lies within three
    binomial standard errors of the expected probability.
    """
    return abs(empirical - expected) <= 3.0 * binomial_stderr(expected, trials) + 1e-12
