"""Simulation and security analysis of two quantum secure direct
communication protocols: the two-step EPR-block protocol (DPP) and the
four-particle GHZ decoy protocol (FPP)."""

from .exceptions import (AttackException, DomainException, ProtocolException, QSDCException,  # noqa: F401
                         StateException)
from .qstate import *  # noqa: F401,F403
from .channel import (AttackParams, Eavesdropper, attack_ghz_travel, attack_qubit, attack_unitary,  # noqa: F401
                      expected_dpp_error, expected_fpp_detection, validate_attack)
from .sequence import Ancilla, QubitSequence, Register, Tag  # noqa: F401
from .config import ProtocolConfig, RunReport, load_attack_grid  # noqa: F401
from .protocol import (decode_bell, encode_symbol, estimate_detection_rate, exact_detection_rate,  # noqa: F401
                       run_dpp, run_fpp)
from .analysis import *  # noqa: F401,F403
from .utilities import *  # noqa: F401,F403

__version__ = '1.0.0'
