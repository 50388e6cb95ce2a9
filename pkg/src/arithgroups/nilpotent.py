"""Nilpotent matrix Lie algebras: flags, exp/log and sanity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import FlagError, InvalidLieAlgebraError, NotNilpotentError
from .exact_linalg import (
    as_rational_matrix,
    flatten,
    identity,
    is_zero,
    kernel,
    linear_combination,
    matmul,
    rank,
    rref,
    solve_left_many,
    sub,
)


@dataclass(frozen=True)
class LieAlgebraRep:
    """Basis ``X_1..X_d`` of a Lie algebra of nilpotent ``dim x dim`` matrices."""

    dim: int
    basis: list = field(default_factory=list)

    def __post_init__(self):
        if self.dim <= 0:
            raise InvalidLieAlgebraError("the vector space must be non-zero")
        for X in self.basis:
            if len(X) != self.dim or any(len(row) != self.dim for row in X):
                raise InvalidLieAlgebraError(
                    f"basis element is not a {self.dim}x{self.dim} matrix"
                )

    def __len__(self):
        return len(self.basis)

    def element(self, coeffs):
        return linear_combination(coeffs, self.basis)

    def coordinates(self, mats):
        """Coordinates of each matrix in ``mats`` over the basis (``None`` if outside)."""
        rows = [flatten(X) for X in self.basis]
        return solve_left_many(rows, [flatten(M) for M in mats], ncols=self.dim**2)


@dataclass(frozen=True)
class Flag:
    """Bases of ``V_1 < ... < V_n = V``, each in reduced row echelon form."""

    spaces: list

    @property
    def length(self):
        return len(self.spaces)

    @property
    def dims(self):
        return tuple(len(b) for b in self.spaces)

    @classmethod
    def from_bases(cls, bases):
        spaces = []
        for b in bases:
            R, piv = rref(as_rational_matrix(b))
            spaces.append(R[: len(piv)])
        dims = [len(b) for b in spaces]
        if any(a >= b for a, b in zip(dims, dims[1:])) or (dims and dims[0] == 0):
            raise FlagError(f"subspace dimensions {dims} are not strictly increasing")
        return cls(spaces)

    @classmethod
    def coordinate(cls, dim, dims):
        """The flag whose i-th space is spanned by the first ``dims[i]`` unit vectors."""
        I = identity(dim)
        return cls([I[:d] for d in dims])


def bracket(x, y):
    return sub(matmul(x, y), matmul(y, x))


def _powers(y):
    """``[y, y^2, ...]`` up to the last nonzero power."""
    n = len(y)
    out = []
    p = y
    k = 1
    while not is_zero(p):
        if k >= n:
            raise NotNilpotentError("matrix is not nilpotent")
        out.append(p)
        p = matmul(p, y)
        k += 1
    return out


def exp_nilpotent(x):
    n = len(x)
    pows = _powers(x)
    coeffs = [Fraction(1, factorial(i + 1)) for i in range(len(pows))]
    return linear_combination([1] + coeffs, [identity(n)] + pows)


def log_unipotent(u):
    n = len(u)
    pows = _powers(sub(u, identity(n)))
    if not pows:
        return [[0] * n for _ in range(n)]
    coeffs = [Fraction((-1) ** i, i + 1) for i in range(len(pows))]
    return linear_combination(coeffs, pows)


def is_unipotent(u):
    try:
        _powers(sub(u, identity(len(u))))
    except NotNilpotentError:
        return False
    return True


def power(u, e):
    """``u**e`` for a unipotent matrix and any integer ``e``, as ``exp(e log u)``."""
    if e == 0:
        return identity(len(u))
    if e == 1:
        return [list(r) for r in u]
    lg = log_unipotent(u)
    return exp_nilpotent([[e * v if v else 0 for v in row] for row in lg])


def _space_basis(rows):
    R, piv = rref(rows)
    return R[: len(piv)]


def compute_flag(g):
    """Shortest flag built from iterated common kernels.

    ``V_1`` is killed by every basis element and ``V_{k+1}`` is the set of
    vectors sent into ``V_k`` by all of them.
    """
    n = g.dim
    spaces = []
    current = []
    while len(current) < n:
        ann = kernel(current, ncols=n) if current else identity(n)
        stacked = []
        for X in g.basis:
            stacked.extend(matmul(ann, X, n))
        nxt = _space_basis(kernel(stacked, ncols=n)) if stacked else identity(n)
        if len(nxt) == len(current):
            raise NotNilpotentError(
                f"common kernels stabilise in dimension {len(current)} < {n}; "
                "the Lie algebra does not consist of nilpotent matrices"
            )
        spaces.append(nxt)
        current = nxt
    return Flag(spaces)


def check_flag(g, flag):
    """Raise :class:`FlagError` unless ``X V_i ⊆ V_{i-1}`` for all basis ``X``."""
    n = g.dim
    if not flag.spaces or flag.dims[-1] != n:
        raise FlagError("the last subspace of a flag must be the whole space")
    if any(len(v) != n for b in flag.spaces for v in b):
        raise FlagError("flag vectors have the wrong length")
    previous = []
    for i, space in enumerate(flag.spaces):
        for X in g.basis:
            images = [[sum(X[r][c] * v[c] for c in range(n) if v[c]) for r in range(n)] for v in space]
            images = [w for w in images if any(w)]
            if not images:
                continue
            if not previous or rank(previous + images) != len(previous):
                raise FlagError(f"X V_{i + 1} is not contained in V_{i}")
        previous = space


@dataclass
class RepDiagnostics:
    nilpotent: list
    independent: bool
    closed: bool
    structure_constants: dict
    problems: list

    @property
    def valid(self):
        return not self.problems


def check_rep(g):
    """Report nilpotency, linear independence and bracket closure of a basis."""
    problems = []
    nilpotent = []
    for i, X in enumerate(g.basis):
        try:
            _powers(X)
            nilpotent.append(True)
        except NotNilpotentError:
            nilpotent.append(False)
            problems.append(f"basis element {i} is not nilpotent")
    flat = [flatten(X) for X in g.basis]
    independent = not flat or rank(flat) == len(flat)
    if not independent:
        problems.append("basis elements are linearly dependent")
    constants = {}
    closed = True
    pairs = [(i, j) for i in range(len(g)) for j in range(i + 1, len(g))]
    brackets = [bracket(g.basis[i], g.basis[j]) for i, j in pairs]
    coords = g.coordinates(brackets) if pairs else []
    for (i, j), c in zip(pairs, coords):
        if c is None:
            closed = False
            problems.append(f"[X{i}, X{j}] is not in the span of the basis")
        elif any(c):
            constants[(i, j)] = c
    return RepDiagnostics(nilpotent, independent, closed, constants, problems)
