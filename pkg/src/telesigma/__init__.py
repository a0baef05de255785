"""Sigma functions for telescopic curves in Miura canonical form."""

from .semigroup import SequenceError, TelescopicSequence, check_telescopic
from .curve import CurveSpec, build_equations

__all__ = ["SequenceError", "TelescopicSequence", "check_telescopic", "CurveSpec", "build_equations"]
__version__ = "0.1.0"
