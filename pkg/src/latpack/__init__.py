"""Dense integer lattices from orthogonal complements of integer vectors.

Lattices Lambda(s) = s-perp intersected with Z^(n+1), exact minima and
determinants, greedy mu-sequence construction with finite obstruction
sets, numerical verification of the dimension-lifting density
inequalities, and the theta-tail fixed-point flow behind the existence
bound.
"""

from . import approx, bounds, constants, lattice, museq, numth, thetaflow
from .errors import InputError, LatpackError, ResourceBudgetError
from .lattice import DensityReport, SVector, density_report, shortest_vector
from .museq import MuSequence, greedy_sequence

__version__ = "0.1.0"

__all__ = [
    "approx",
    "bounds",
    "constants",
    "lattice",
    "museq",
    "numth",
    "thetaflow",
    "LatpackError",
    "InputError",
    "ResourceBudgetError",
    "SVector",
    "DensityReport",
    "density_report",
    "shortest_vector",
    "MuSequence",
    "greedy_sequence",
    "__version__",
]
