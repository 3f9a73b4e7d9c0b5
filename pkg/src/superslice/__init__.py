"""Exact symbolic toolkit for slices of Lie superalgebras.

Builds basic classical Lie superalgebras from structure constants, slices
through nilpotent orbits in exponential gauge, the finite and arc-space
Miura maps, and the graded complexes needed to verify all of it with
exact rational arithmetic.
"""

from ._kernels import IMPLEMENTATION as kernel_implementation
from .superpoly import (PolyRing, SuperPolynomial, Variable, poly_mul,
                        partial_derivative, total_derivative)
from .linalg import RationalMatrix, exact_rank, nullspace, rref, solve

__version__ = "0.1.0"
