"""Best approximation vectors for two-variable systems of linear forms.

Sup-norm and spherical record sequences, exponent estimates, transference
bounds and structural checks on computed sequences.
"""
from .numerics import PrecisionContext, DEFAULT_PRECISION
from .geometry import ThetaMatrix, SubspaceL, ExtendedVector
from .best_approx import (
    ApproxSequence,
    Staircase,
    brute_force,
    enumerate_spherical,
    enumerate_sup,
    staircase,
)

__version__ = "0.1.0"

__all__ = [
    "PrecisionContext",
    "DEFAULT_PRECISION",
    "ThetaMatrix",
    "SubspaceL",
    "ExtendedVector",
    "ApproxSequence",
    "Staircase",
    "brute_force",
    "enumerate_sup",
    "enumerate_spherical",
    "staircase",
]
