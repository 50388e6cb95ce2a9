"""One step of the recursion: derived space, derived action and error map.

Everything is done in adapted coordinates.  The rows ``u_1..u_D`` of a
lattice basis adapted to the whole flag are used as the new basis of V, so
that L becomes Z^D and every V_i is spanned by the first ``dim V_i``
coordinates.  In these coordinates:

* the derived action of a matrix ``M`` is the pair of diagonal blocks
  ``M[:t, :t]`` (action on V_{n-1}) and ``M[s:, s:]`` (action on V/V_1);
* the error map is the block ``M[:s, t:]``, since the projection onto V_1
  along ``W_1 = <u_{s+1}..u_D>`` just keeps the first ``s`` coordinates;
* the induced lattice is the set of integral ``s x (D - t)`` blocks.

The coordinates of V* are ordered by flag level so that the derived flag is
again a coordinate flag and the derived lattice is Z^{dim V*}.  The next
level therefore starts out already adapted.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import FlagError, InconsistencyError
from .exact_linalg import (
    canonical,
    identity,
    inverse,
    kernel,
    linear_combination,
    matmul,
    rank,
    rref,
    solve_left_many,
    transpose,
)
from .lattice import AdaptedBasis, Lattice, flag_adapted_basis, intersect_with_coordinates
from .nilpotent import Flag, LieAlgebraRep


def is_coordinate_flag(flag, dim):
    """True when every space of ``flag`` is spanned by leading unit vectors."""
    for space in flag.spaces:
        d = len(space)
        for i, row in enumerate(space):
            if len(row) != dim or row[i] != 1 or any(v for j, v in enumerate(row) if j != i):
                return False
        if d > dim:
            return False
    return True


@dataclass(frozen=True)
class ErrorMapContext:
    """The error map and the induced lattice of one level.

    ``change`` holds the adapted basis vectors as columns, so a matrix ``X``
    in input coordinates is ``change^-1 X change`` in adapted coordinates.
    ``positions`` lists the ``(row, column)`` entries of the block
    ``[:s, t:]`` that are in use: all of them, or only the support subspace.
    """

    dim: int
    s: int
    t: int
    change: list
    change_inv: list
    positions: list

    @property
    def v1_basis(self):
        """Basis of L ∩ V_1 in input coordinates (as rows)."""
        return transpose(self.change)[: self.s]

    @property
    def w_basis(self):
        """Basis of L ∩ W_{n-1} in input coordinates (as rows)."""
        return transpose(self.change)[self.t :]

    @property
    def trivial_change(self):
        return self.change_inv is None

    def to_adapted(self, X):
        if self.change_inv is None:
            return X
        return matmul(matmul(self.change_inv, X, self.dim), self.change, self.dim)

    def from_adapted(self, X):
        if self.change_inv is None:
            return X
        return matmul(matmul(self.change, X, self.dim), self.change_inv, self.dim)

    def block(self, M):
        """The error map of an adapted matrix as an ``s x (dim - t)`` matrix."""
        return [row[self.t :] for row in M[: self.s]]

    def flat(self, M, strict=False):
        """Error map of an adapted matrix, as a vector over ``positions``.

        With ``strict`` an entry of the block outside ``positions`` raises
        :class:`InconsistencyError`.
        """
        if strict:
            used = set(self.positions)
            for r in range(self.s):
                for c in range(self.t, self.dim):
                    if M[r][c] and (r, c) not in used:
                        raise InconsistencyError(
                            f"error map has support outside the support subspace at {(r, c)}"
                        )
        return [M[r][c] for r, c in self.positions]

    def unflat(self, vec):
        """The ``s x (dim - t)`` block with ``vec`` at ``positions``."""
        out = [[0] * (self.dim - self.t) for _ in range(self.s)]
        for (r, c), v in zip(self.positions, vec):
            out[r][c - self.t] = v
        return out


@dataclass(frozen=True)
class GammaSplit:
    """A basis ``γ_1..γ_N`` of Γ whose first ``m`` members span Γ ∩ W'.

    Flat error-map vectors have ``size`` coordinates and Γ is the integral
    ones.  W' vanishes outside the coordinates ``cols``, so the basis is an
    adapted basis of Z^cols (stored as ``local_basis`` over ``cols``)
    followed by the unit vectors of the remaining coordinates.
    ``local_coords`` turns the ``cols`` part of a vector into coordinates
    over ``local_basis``.  The coordinates after the first ``m`` form the
    map ψ, and a vector lies in Γ + W' exactly when they are all integers.
    """

    size: int
    cols: list
    local_basis: list
    local_coords: list
    m: int

    @classmethod
    def from_subspace(cls, size, w_rows):
        cols = [c for c in range(size) if any(row[c] for row in w_rows)]
        local = [[row[c] for c in cols] for row in w_rows]
        C, T = intersect_with_coordinates(identity(len(cols)), local)
        return cls(size=size, cols=cols, local_basis=C, local_coords=T, m=len(w_rows))

    @property
    def rest(self):
        used = set(self.cols)
        return [c for c in range(self.size) if c not in used]

    def vector(self, i):
        """The i-th basis vector of Γ as a flat vector."""
        out = [0] * self.size
        if i < len(self.cols):
            for c, v in zip(self.cols, self.local_basis[i]):
                out[c] = v
        else:
            out[self.rest[i - len(self.cols)]] = 1
        return out

    @property
    def basis(self):
        return [self.vector(i) for i in range(self.size)]

    def coordinates(self, u):
        k = len(self.cols)
        out = [0] * k
        for x, row in zip((u[c] for c in self.cols), self.local_coords):
            if x:
                for j, a in enumerate(row):
                    if a:
                        out[j] += x * a
        return [canonical(v) for v in out] + [u[c] for c in self.rest]

    def psi(self, u):
        return self.coordinates(u)[self.m :]


def gamma_split(ctx, w_rows):
    return GammaSplit.from_subspace(len(ctx.positions), w_rows)


@dataclass(frozen=True)
class DerivedData:
    """Everything one level of the main recursion needs.

    Matrices named ``*_adapted`` or produced by :func:`dpi` live in adapted
    coordinates; ``coords`` lists the V* coordinates as ``(block, index)``
    with block 0 for V_{n-1} and block 1 for V/V_1.
    """

    adapted: AdaptedBasis
    dims: tuple
    vstar_dim: int
    lstar: Lattice
    derived_flag: Flag
    coords: list
    g_adapted: list
    n_coeffs: list
    n_adapted: list
    q_source: list
    q_basis: LieAlgebraRep
    n_image_basis: list

    @property
    def s(self):
        return self.adapted.s

    @property
    def t(self):
        return self.adapted.t

    @property
    def n_basis(self):
        return self.n_adapted


def _levels(dims, D):
    lev = [0] * D
    i = 0
    for j in range(D):
        while j >= dims[i]:
            i += 1
        lev[j] = i + 1
    return lev


def derived_coordinates(dims):
    """V* coordinates ordered by derived flag level, and the derived dims."""
    D = dims[-1]
    s, t = dims[0], dims[-2]
    lev = _levels(dims, D)
    coords = [(lev[j], 0, j) for j in range(t)] + [(lev[j] - 1, 1, j) for j in range(s, D)]
    coords.sort(key=lambda c: c[0])
    new_dims = tuple(dims[i] + dims[i + 1] - s for i in range(len(dims) - 1))
    return [(b, j) for _, b, j in coords], new_dims


def dpi(M, coords):
    """Derived action of an adapted matrix: its blocks on V_{n-1} and V/V_1."""
    block = [b for b, _ in coords]
    idx = [j for _, j in coords]
    out = []
    for b, j in coords:
        src = M[j]
        out.append([src[jj] if bb == b else 0 for bb, jj in zip(block, idx)])
    return out


def derived_action(g, coords):
    """Action of a group element on V*, also a block extraction."""
    return dpi(g, coords)


def error_map(phi, ctx):
    """Error map of a matrix given in input coordinates, as an ``s x (dim-t)`` block."""
    return ctx.block(ctx.to_adapted(phi))


def _nonzero_columns(rows, ncols):
    return [c for c in range(ncols) if any(r[c] for r in rows)]


def _compress(rows, cols):
    return [[r[c] for c in cols] for r in rows]


def support_subspace(g_adapted, s, t, dim):
    """Positions of the block ``[:s, t:]`` where the unital algebra A generated by ``g`` can be nonzero.

    Column ``c`` of the elements of A is the cyclic module ``A e_c``.  It is
    spanned by a basis found by closing ``e_c`` under the generators, and its
    rows below ``s`` that are nonzero in some basis vector are the support.
    """
    sparse = [[[(j, v) for j, v in enumerate(row) if v] for row in X] for X in g_adapted]
    positions = []
    for c in range(t, dim):
        echelon = {}  # pivot index -> reduced vector (dict)
        support = set()
        queue = [{c: 1}]
        _reduce_insert(echelon, {c: 1})
        while queue:
            v = queue.pop()
            for X in sparse:
                w = {}
                for r, row in enumerate(X):
                    acc = 0
                    for j, a in row:
                        x = v.get(j)
                        if x:
                            acc += a * x
                    if acc:
                        w[r] = acc
                if not w:
                    continue
                if _reduce_insert(echelon, dict(w)):
                    support.update(r for r in w if r < s)
                    queue.append(w)
        positions.extend((r, c) for r in sorted(support))
    positions.sort()
    return positions


def _reduce_insert(echelon, v):
    """Reduce ``v`` against an echelon basis and insert it if independent."""
    while v:
        p = max(v)
        if p not in echelon:
            echelon[p] = v
            return True
        b = echelon[p]
        f = v[p] / b[p]
        for j, x in b.items():
            y = v.get(j, 0) - f * x
            if y:
                v[j] = y
            else:
                v.pop(j, None)
    return False


def _independent_and_kernel(rows):
    """Indices of a maximal independent subset of ``rows`` and the left kernel."""
    if not rows:
        return [], []
    cols = _nonzero_columns(rows, len(rows[0]))
    if not cols:
        return [], identity(len(rows))
    At = transpose(_compress(rows, cols))
    pivots = rref(At)[1]
    return pivots, kernel(At, ncols=len(rows))


def adapt(L, flag):
    """Lattice basis adapted to ``flag`` as rows, or ``None`` when already standard."""
    D = L.ambient_dim
    if L.is_standard and is_coordinate_flag(flag, D):
        return None
    return flag_adapted_basis(L.basis, flag.spaces)


def build_derived(L, g, flag, support_optimization=True):
    """Derived data and error map context of the level ``(V, L, g, flag)``."""
    D = g.dim
    if flag.length < 2:
        raise FlagError("the derived representation needs a flag of length at least 2")
    dims = flag.dims
    s, t = dims[0], dims[-2]
    rows = adapt(L, flag)
    if rows is None:
        change = change_inv = None
        rows = identity(D)
        g_adapted = [X for X in g.basis]
    else:
        change = transpose(rows)
        change_inv = inverse(change)
        g_adapted = [matmul(matmul(change_inv, X, D), change, D) for X in g.basis]
    adapted = AdaptedBasis(rows=rows, s=s, t=t)

    coords, new_dims = derived_coordinates(dims)
    Dstar = len(coords)
    images = [dpi(X, coords) for X in g_adapted]
    flat_images = [[v for row in Y for v in row] for Y in images]
    q_source, n_coeffs = _independent_and_kernel(flat_images)
    n_adapted = [linear_combination(c, g_adapted) for c in n_coeffs]
    q_basis = LieAlgebraRep(Dstar, [images[i] for i in q_source])

    if support_optimization:
        positions = support_subspace(g_adapted, s, t, D)
    else:
        positions = [(r, c) for r in range(s) for c in range(t, D)]
    ctx = ErrorMapContext(
        dim=D,
        s=s,
        t=t,
        change=change if change is not None else identity(D),
        change_inv=change_inv,
        positions=positions,
    )
    n_image = [ctx.flat(Y) for Y in n_adapted]
    if n_image and rank(n_image) != len(n_image):
        raise InconsistencyError(
            "the error map is not injective on the kernel of the derived action; "
            "the Lie algebra does not act faithfully through a flag"
        )
    data = DerivedData(
        adapted=adapted,
        dims=tuple(dims),
        vstar_dim=Dstar,
        lstar=Lattice.standard(Dstar),
        derived_flag=Flag.coordinate(Dstar, new_dims),
        coords=coords,
        g_adapted=g_adapted,
        n_coeffs=n_coeffs,
        n_adapted=n_adapted,
        q_source=q_source,
        q_basis=q_basis,
        n_image_basis=n_image,
    )
    return data, ctx


def preimage_dpi(data, y):
    """An element ``x`` of ``g`` (adapted coordinates) with ``dpi(x) = y``."""
    if not data.q_source:
        if any(any(row) for row in y):
            raise ValueError("element is not in the image of the derived action")
        D = len(data.adapted.rows)
        return [[0] * D for _ in range(D)]
    rows = [[v for row in Y for v in row] for Y in data.q_basis.basis]
    sol = solve_left_many(rows, [[v for row in y for v in row]])[0]
    if sol is None:
        raise ValueError("element is not in the image of the derived action")
    return linear_combination(sol, [data.g_adapted[i] for i in data.q_source])


def n_lattice_basis(data, ctx, split):
    """Basis ``x_1..x_l`` of the elements of n whose error map is in Γ."""
    l = len(data.n_adapted)
    if l == 0:
        return []
    targets = [split.vector(i) for i in range(l)]
    sols = solve_left_many(data.n_image_basis, targets, ncols=len(ctx.positions))
    if any(c is None for c in sols):
        raise InconsistencyError("Γ ∩ ε(n) is not contained in ε(n)")
    return [linear_combination(c, data.n_adapted) for c in sols]
