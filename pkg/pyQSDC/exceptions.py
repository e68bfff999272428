"""Exceptions"""


class QSDCException(Exception):
    pass


class DomainException(QSDCException, ValueError):
    """A numeric argument is outside the domain of a closed-form result"""
    pass


class StateException(QSDCException):
    """Register size, qubit index or normalization problems"""
    pass


class AttackException(QSDCException):
    pass


class ProtocolException(QSDCException):
    pass
