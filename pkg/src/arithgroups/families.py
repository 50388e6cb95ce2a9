"""The two series of test Lie algebras g_n and h_n."""
from __future__ import annotations

from .nilpotent import LieAlgebraRep


def _unit(n, i, j, c=1):
    M = [[0] * n for _ in range(n)]
    M[i - 1][j - 1] = c
    return M


def g_family(n):
    """g_n in gl_n: ``x_i = e_{1,i+1}`` for i < n and ``x_n = sum_{j=2}^{n-1} e_{j,j+1}``."""
    if n < 3:
        raise ValueError("g_n is defined here for n >= 3")
    basis = [_unit(n, 1, i + 1) for i in range(1, n)]
    xn = [[0] * n for _ in range(n)]
    for j in range(2, n):
        xn[j - 1][j] = 1
    basis.append(xn)
    return LieAlgebraRep(n, basis)


def h_family(n):
    """h_n in gl_n: ``y_1 = sum_i i e_{i,i+1}`` and ``y_k = sum_i e_{i,i+k}`` for 2 <= k < n."""
    if n < 4:
        raise ValueError("h_n is defined here for n >= 4")
    basis = []
    for k in range(1, n):
        y = [[0] * n for _ in range(n)]
        for i in range(1, n - k + 1):
            y[i - 1][i + k - 1] = i if k == 1 else 1
        basis.append(y)
    return LieAlgebraRep(n, basis)


FAMILIES = {"gn": g_family, "hn": h_family}


def family(name, n):
    try:
        return FAMILIES[name](n)
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None
