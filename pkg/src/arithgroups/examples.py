"""Small fixed inputs: the 4-dimensional worked example and friends."""
from __future__ import annotations

from fractions import Fraction

from .nilpotent import LieAlgebraRep
from .problem import ProblemFile


def unit(n, i, j, c=1):
    """The n x n matrix with ``c`` at the 1-based position ``(i, j)``."""
    M = [[0] * n for _ in range(n)]
    M[i - 1][j - 1] = c
    return M


def worked_example():
    """span{e13, e14, e23 + e34} in gl_4, the group of the matrices

        1 0 a b
        0 1 c c^2/2
        0 0 1 c
        0 0 0 1
    """
    x = unit(4, 2, 3)
    x[2][3] = 1
    return LieAlgebraRep(4, [unit(4, 1, 3), unit(4, 1, 4), x])


def worked_example_elements():
    """The elements n, g1, g2, g1' and n' of the worked example."""
    half = Fraction(1, 2)
    n = [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    g1 = [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    g2 = [[1, 0, 0, 0], [0, 1, 1, half], [0, 0, 1, 1], [0, 0, 0, 1]]
    g1p = [[1, 0, 1, half], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    np_ = [[1, 0, 0, half], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    return {"n": n, "g1": g1, "g2": g2, "g1'": g1p, "n'": np_}


def abelian_example():
    """span{e13, e23} in gl_3."""
    return LieAlgebraRep(3, [unit(3, 1, 3), unit(3, 2, 3)])


def worked_example_problem():
    g = worked_example()
    return ProblemFile(dimension=4, lie_algebra=g.basis, name="worked example", verify=True)
