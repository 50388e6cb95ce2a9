"""Generators of arithmetic subgroups of unipotent matrix groups.

Given a Lie algebra g of nilpotent rational matrices and a full lattice L,
compute_generators returns a T-sequence for the group of elements of exp(g)
that map L onto itself.
"""
from .arithmetic import TSequenceResult, compute_generators, member, verify, word
from .errors import (
    ArithGroupError,
    FlagError,
    InconsistencyError,
    InvalidLieAlgebraError,
    NotNilpotentError,
    ProblemFormatError,
)
from .lattice import Lattice
from .nilpotent import Flag, LieAlgebraRep, compute_flag, exp_nilpotent, log_unipotent

__all__ = [
    "ArithGroupError",
    "Flag",
    "FlagError",
    "InconsistencyError",
    "InvalidLieAlgebraError",
    "Lattice",
    "LieAlgebraRep",
    "NotNilpotentError",
    "ProblemFormatError",
    "TSequenceResult",
    "compute_flag",
    "compute_generators",
    "exp_nilpotent",
    "log_unipotent",
    "member",
    "verify",
    "word",
]
