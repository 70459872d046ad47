"""Quantum spin networks at roots of unity and volumes of hyperideal polyhedra."""
import os

import mpmath

from . import qarith

__version__ = "0.1.0"

_prec = int(os.environ.get("POLYVC_PRECISION", qarith.DEFAULT_PRECISION))
if mpmath.mp.prec < _prec:
    mpmath.mp.prec = _prec
