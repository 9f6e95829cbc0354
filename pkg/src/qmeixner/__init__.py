"""Exact construction and verification of q-Meixner multiple orthogonal
polynomials of the first kind on the lattice x(s) = (q**s - 1)/(q - 1)."""

from .classical import ClassicalParams, classical_construct, classical_rodrigues
from .errors import QMeixnerError
from .index import MultiIndex
from .lattice import LatticePolynomial, lattice_x
from .mop import MopPolynomial, construct, recurrence_construct, rodrigues_construct, solve_orthogonality
from .numeric import find_zeros, limit_study
from .scalars import QField, QScalar
from .verify import run_suite
from .weights import WeightParams

__all__ = [
    "ClassicalParams",
    "LatticePolynomial",
    "MopPolynomial",
    "MultiIndex",
    "QField",
    "QMeixnerError",
    "QScalar",
    "WeightParams",
    "classical_construct",
    "classical_rodrigues",
    "construct",
    "find_zeros",
    "lattice_x",
    "limit_study",
    "recurrence_construct",
    "rodrigues_construct",
    "run_suite",
    "solve_orthogonality",
]
