"""Lattice algorithms built on the Smith normal form.

Lattices are given by matrices whose rows form a basis.  The routines here
are saturation, intersection of a lattice with a subspace, adapted
(L-complement) bases for a pair of nested subspaces, and lattices of
integral relations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import (
    as_integer_matrix,
    as_rational_matrix,
    clear_denominators,
    identity,
    inverse,
    is_identity,
    matmul,
    rank,
    snf,
    solve_left,
    solve_left_many,
)


@dataclass(frozen=True)
class Lattice:
    """A full-dimensional lattice of Q^n spanned by the rows of ``basis``."""

    basis: list

    def __post_init__(self):
        n = len(self.basis)
        if n == 0:
            raise ValueError("a lattice needs a non-empty basis")
        if any(len(row) != n for row in self.basis):
            raise ValueError("lattice basis must be square")
        if rank(self.basis) != n:
            raise ValueError("lattice basis is not invertible")

    @classmethod
    def standard(cls, n):
        return cls(identity(n))

    @property
    def ambient_dim(self):
        return len(self.basis)

    @property
    def is_standard(self):
        return is_identity(self.basis)

    def coordinates(self, v):
        return solve_left(self.basis, list(v))

    def __contains__(self, v):
        c = self.coordinates(v)
        return all(isinstance(x, int) for x in c)


def saturate(A):
    """Rows spanning Z^n intersected with the rational row space of ``A``.

    The rows of ``A`` must be integral and linearly independent.  With
    ``S = P A Q`` the result is ``P^-1 S' Q^-1`` where ``S'`` is ``S`` with
    its diagonal replaced by ones.
    """
    A = as_integer_matrix(A)
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    dec = snf(A, n)
    if dec.rank < m:
        raise ValueError("saturate needs linearly independent rows")
    return matmul(dec.P_inv, dec.Q_inv[:m], n)


def intersect_with_coordinates(A, B):
    """Like :func:`intersect_lattice_subspace`, also returning coordinates.

    Returns ``(C, T)`` where the rows of ``C`` span the lattice of ``A``,
    the first ``len(B)`` rows span its intersection with the row space of
    ``B``, and ``v T`` is the coordinate vector of ``v`` with respect to the
    rows of ``C``.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("lattice basis must be square")
    standard = is_identity(A)
    A_inv = None if standard else inverse(A)
    m = len(B)
    if m == 0:
        return ([list(row) for row in A], identity(n) if standard else A_inv)
    if any(len(row) != n for row in B):
        raise ValueError("subspace basis has the wrong length")
    coords = as_rational_matrix(B) if standard else matmul(B, A_inv, n)
    coords = [clear_denominators(row)[0] for row in coords]
    dec = snf(coords, n)
    if dec.rank < m:
        raise ValueError("subspace basis rows are linearly dependent")
    # The saturation of `coords` is P^-1 [I | 0] Q^-1, so the same Q brings
    # it to Smith form (diagonal all ones): its Q^-1 is the Q^-1 found here.
    if standard:
        return dec.Q_inv, dec.Q
    return matmul(dec.Q_inv, A, n), matmul(A_inv, dec.Q, n)


def intersect_lattice_subspace(A, B):
    """Basis of L (rows of ``A``) whose first ``len(B)`` rows span L ∩ rowspace(B)."""
    return intersect_with_coordinates(A, B)[0]


@dataclass(frozen=True)
class AdaptedBasis:
    """Basis ``u_1..u_n`` of L with ``u_1..u_s`` spanning L∩V1 and ``u_1..u_t`` spanning L∩V_{n-1}.

    The complements are ``W1 = <u_{s+1}..u_n>`` and ``W_{n-1} = <u_{t+1}..u_n>``.
    """

    rows: list
    s: int
    t: int

    @property
    def v1(self):
        return self.rows[: self.s]

    @property
    def vn1(self):
        return self.rows[: self.t]

    @property
    def w1(self):
        return self.rows[self.s :]

    @property
    def wn1(self):
        return self.rows[self.t :]


def _check_independent(rows, what):
    if rows and rank(rows) != len(rows):
        raise ValueError(f"{what} basis rows are linearly dependent")


def l_complements(A, v1_basis, vn1_basis):
    """Adapted basis of the lattice spanned by ``A`` for ``V1 ⊆ V_{n-1}``."""
    n = len(A)
    _check_independent(v1_basis, "V1")
    _check_independent(vn1_basis, "V_{n-1}")
    s, t = len(v1_basis), len(vn1_basis)
    if s > t or (s and rank(list(vn1_basis) + list(v1_basis)) != t):
        raise ValueError("V1 is not contained in V_{n-1}")
    W = intersect_lattice_subspace(A, vn1_basis)
    top = W[:t]
    alpha = solve_left_many(top, [list(v) for v in v1_basis], ncols=n)
    B = intersect_lattice_subspace(identity(t), alpha)
    rows = (top if is_identity(B) else matmul(B, top, n)) + W[t:]
    return AdaptedBasis(rows=rows, s=s, t=t)


def flag_adapted_basis(A, spaces):
    """Basis of the lattice of ``A`` adapted to a whole chain of subspaces.

    ``spaces`` lists bases of ``V_1 < ... < V_n = V``; in the result the
    first ``dim V_i`` rows span ``L ∩ V_i`` for every ``i``.
    """
    n = len(A)
    rows = [list(r) for r in A]
    dims = [len(b) for b in spaces]
    for i in range(len(spaces) - 2, -1, -1):
        d = dims[i + 1]
        top = rows[:d]
        alpha = solve_left_many(top, [list(v) for v in spaces[i]], ncols=n)
        if any(a is None for a in alpha):
            raise ValueError("subspaces are not nested")
        B = intersect_lattice_subspace(identity(d), alpha)
        if not is_identity(B):
            rows[:d] = matmul(B, top, n)
    return rows


def integral_relations(A, ncols=None):
    """Basis of ``{e in Z^m : e A in Z^n}`` for a rational m×n matrix ``A``."""
    m = len(A)
    if m == 0:
        return []
    n = ncols if ncols is not None else len(A[0])
    # A column that is integral in every row imposes no condition.
    cols = [j for j in range(n) if any(Fraction(row[j]).denominator != 1 for row in A)]
    if not cols:
        return identity(m)
    A = [[row[j] for j in cols] for row in A]
    # With M = [A; I_n], the left kernel {v : v M = 0} has the basis
    # (e_i, -a_i), i = 1..m.
    kernel = [
        clear_denominators([1 if j == i else 0 for j in range(m)] + [-x for x in A[i]])[0]
        for i in range(m)
    ]
    return [row[:m] for row in saturate(kernel)]
