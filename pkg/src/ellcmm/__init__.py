"""Exact verification of Macdonald, Shiraishi and elliptic CMM identities for the A1 case."""

from .exactfield import PSeries, Scalar, Tower
from .macdonald import macdonald_A1
from .report import VerificationReport
from .shiraishi import reexpand_p_over_s, shiraishi_series

__version__ = "0.1.0"

__all__ = [
    "PSeries",
    "Scalar",
    "Tower",
    "VerificationReport",
    "macdonald_A1",
    "reexpand_p_over_s",
    "shiraishi_series",
]
