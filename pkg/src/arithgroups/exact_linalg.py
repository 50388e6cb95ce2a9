"""Exact dense linear algebra over the integers and the rationals.

Matrices are plain lists of rows.  Entries are ``int`` or
``fractions.Fraction``; an ``int`` is simply a rational with denominator 1,
and nothing in this module ever produces a float.  Most routines skip zero
entries, which keeps the (frequently very sparse) matrices of the main
algorithm cheap even though the storage is dense.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    I = zeros(n, n)
    for i in range(n):
        I[i][i] = 1
    return I


def is_identity(A):
    n = len(A)
    for i, row in enumerate(A):
        if len(row) != n or row[i] != 1:
            return False
        for j, v in enumerate(row):
            if v and j != i:
                return False
    return True


def is_zero(A):
    return not any(any(row) for row in A)


def copy(A):
    return [list(row) for row in A]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def canonical(x):
    """Return ``x`` as an int when it is integral, else as a Fraction."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def as_rational_matrix(A):
    return [[canonical(v) for v in row] for row in A]


def is_integral(A):
    for row in A:
        for v in row:
            if not isinstance(v, int) and Fraction(v).denominator != 1:
                return False
    return True


def as_integer_matrix(A):
    out = []
    for row in A:
        new = []
        for v in row:
            if isinstance(v, int):
                new.append(v)
                continue
            v = Fraction(v)
            if v.denominator != 1:
                raise ValueError(f"matrix entry {v} is not an integer")
            new.append(v.numerator)
        out.append(new)
    return out


def clear_denominators(row):
    """Scale a rational vector by the lcm of its denominators."""
    d = 1
    for v in row:
        if not isinstance(v, int):
            d = lcm(d, Fraction(v).denominator)
    return [int(v * d) for v in row], d


def primitive(row):
    """Integral, content-free positive multiple of a nonzero rational vector."""
    ints, _ = clear_denominators(row)
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(c, A):
    if not c:
        return [[0] * len(row) for row in A]
    return [[c * v if v else 0 for v in row] for row in A]


def linear_combination(coeffs, mats):
    """Sum of ``c * M`` over paired coefficients and same-shaped matrices."""
    out = None
    for c, M in zip(coeffs, mats):
        if not c:
            continue
        if out is None:
            out = [[0] * len(row) for row in M]
        for orow, mrow in zip(out, M):
            for j, v in enumerate(mrow):
                if v:
                    orow[j] += c * v
    if out is None:
        n = len(mats[0]) if mats else 0
        m = len(mats[0][0]) if mats and mats[0] else 0
        return zeros(n, m)
    return [[canonical(v) if v else 0 for v in row] for row in out]


def matmul(A, B, ncols=None):
    if ncols is None:
        ncols = len(B[0]) if B else 0
    Bnz = [[(j, b) for j, b in enumerate(row) if b] for row in B]
    out = []
    for row in A:
        acc = [0] * ncols
        for k, a in enumerate(row):
            if a:
                for j, b in Bnz[k]:
                    acc[j] += a * b
        out.append(acc)
    return out


def matvec(A, v):
    nz = [(j, x) for j, x in enumerate(v) if x]
    return [sum(row[j] * x for j, x in nz) for row in A]


def vecmat(v, A, ncols=None):
    if ncols is None:
        ncols = len(A[0]) if A else 0
    acc = [0] * ncols
    for k, x in enumerate(v):
        if x:
            for j, a in enumerate(A[k]):
                if a:
                    acc[j] += x * a
    return acc


def flatten(A):
    return [v for row in A for v in row]


def rref(A, pivot_cols=None):
    """Reduced row echelon form over the rationals.

    Only the first ``pivot_cols`` columns are eligible for pivots (all of
    them by default); row operations always act on the full rows, which is
    how augmented systems are handled.  Returns ``(R, pivots)``.
    """
    R = [list(row) for row in A]
    m = len(R)
    width = len(R[0]) if R else 0
    n = width if pivot_cols is None else pivot_cols
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        row = R[r]
        if row[c] != 1:
            inv = 1 / Fraction(row[c])
            row = R[r] = [canonical(v * inv) if v else 0 for v in row]
        nz = [(j, row[j]) for j in range(c, width) if row[j]]
        for i in range(m):
            if i == r:
                continue
            Ri = R[i]
            f = Ri[c]
            if f:
                for j, v in nz:
                    Ri[j] -= f * v
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A):
    return len(rref(A)[1])


def kernel(A, ncols=None):
    """Rows form a basis of ``{x : A x = 0}``."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return identity(n)
    R, pivots = rref(A)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        x = [0] * n
        x[f] = 1
        for i, p in enumerate(pivots):
            v = R[i][f]
            if v:
                x[p] = canonical(-v)
        basis.append(x)
    return basis


def left_kernel(A, ncols=None):
    """Rows form a basis of ``{v : v A = 0}``; there are ``rows(A) - rank(A)`` of them."""
    m = len(A)
    if m == 0:
        return []
    n = ncols if ncols is not None else len(A[0])
    if n == 0:
        return identity(m)
    return kernel(transpose(A), ncols=m)


def solve_left_many(A, bs, ncols=None):
    """Solve ``x A = b`` for every ``b`` in ``bs``.

    Returns a list holding, for each right-hand side, the pivot solution of
    the reduced row echelon form (free variables set to zero) or ``None``
    when ``b`` lies outside the row span of ``A``.  Columns on which ``A``
    and all right-hand sides vanish are dropped before eliminating.
    """
    r = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else (len(bs[0]) if bs else 0))
    cols = [j for j in range(n) if any(row[j] for row in A) or any(b[j] for b in bs)]
    if r == 0:
        return [[] if not any(b) else None for b in bs]
    aug = [[row[j] for row in A] + [b[j] for b in bs] for j in cols]
    if not aug:
        return [[0] * r for _ in bs]
    R, pivots = rref(aug, pivot_cols=r)
    rk = len(pivots)
    out = []
    for k in range(len(bs)):
        c = r + k
        if any(R[i][c] for i in range(rk, len(R))):
            out.append(None)
            continue
        x = [0] * r
        for i, p in enumerate(pivots):
            x[p] = canonical(R[i][c])
        out.append(x)
    return out


def solve_left(A, b):
    """Solve ``x A = b``; ``None`` when ``b`` is not in the row span of ``A``."""
    return solve_left_many(A, [b], ncols=len(b))[0]


def inverse(A):
    n = len(A)
    if is_identity(A):
        return identity(n)
    aug = [list(row) + e for row, e in zip(A, identity(n))]
    R, pivots = rref(aug, pivot_cols=n)
    if len(pivots) < n:
        raise ValueError("matrix is singular")
    return [[canonical(v) for v in row[n:]] for row in R]


def det(A):
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not M[k][k]:
            p = next((i for i in range(k + 1, n) if M[i][k]), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = Fraction(M[k][k])
    return canonical(sign * M[n - 1][n - 1])


# ---------------------------------------------------------------------------
# Normal forms over the integers


@dataclass(frozen=True)
class SmithDecomposition:
    """``S = P A Q`` with ``S`` in Smith normal form.

    ``P_inv`` and ``Q_inv`` are the exact inverses of the unimodular
    transforms, tracked during the elimination.
    """

    S: list
    P: list
    Q: list
    rank: int
    diagonal: list
    P_inv: list
    Q_inv: list


def _addmul(dst, src, q):
    # dst -= q * src
    for j, v in enumerate(src):
        if v:
            dst[j] -= q * v


def snf(A, ncols=None):
    """Smith normal form with unimodular transforms.

    Pivoting takes an entry of minimal absolute value in the remaining
    block, stopping early on a unit.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    S = as_integer_matrix(A)
    P = identity(m)
    PinvT = identity(m)  # rows are the columns of P^-1
    QT = identity(n)  # rows are the columns of Q
    Qinv = identity(n)

    def row_swap(i, k):
        S[i], S[k] = S[k], S[i]
        P[i], P[k] = P[k], P[i]
        PinvT[i], PinvT[k] = PinvT[k], PinvT[i]

    def row_addmul(i, k, q):
        # row i -= q * row k
        _addmul(S[i], S[k], q)
        _addmul(P[i], P[k], q)
        _addmul(PinvT[k], PinvT[i], -q)

    def col_swap(j, k, start):
        for row in S[start:]:
            row[j], row[k] = row[k], row[j]
        QT[j], QT[k] = QT[k], QT[j]
        Qinv[j], Qinv[k] = Qinv[k], Qinv[j]

    def col_addmul(j, k, q, start):
        # column j -= q * column k
        for row in S[start:]:
            v = row[k]
            if v:
                row[j] -= q * v
        _addmul(QT[j], QT[k], q)
        _addmul(Qinv[k], Qinv[j], -q)

    t = 0
    while t < min(m, n):
        best = None
        bestval = 0
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < bestval):
                    best, bestval = (i, j), abs(v)
                    if bestval == 1:
                        break
            if bestval == 1:
                break
        if best is None:
            break
        i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t, t)
        while True:
            p = S[t][t]
            restart = False
            for i in range(t + 1, m):
                v = S[i][t]
                if v:
                    row_addmul(i, t, v // p)
                    if S[i][t]:
                        row_swap(i, t)
                        restart = True
                        break
            if restart:
                continue
            top = S[t]
            for j in range(t + 1, n):
                v = top[j]
                if v:
                    col_addmul(j, t, v // p, t)
                    if top[j]:
                        col_swap(j, t, t)
                        restart = True
                        break
            if restart:
                continue
            if abs(p) != 1:
                bad = next(
                    (i for i in range(t + 1, m) if any(v % p for v in S[i][t + 1:])),
                    None,
                )
                if bad is not None:
                    row_addmul(t, bad, -1)
                    continue
            break
        if S[t][t] < 0:
            S[t][t] = -S[t][t]
            P[t] = [-v for v in P[t]]
            PinvT[t] = [-v for v in PinvT[t]]
        t += 1

    diagonal = [S[i][i] for i in range(t)]
    return SmithDecomposition(
        S=S,
        P=P,
        Q=transpose(QT, n),
        rank=t,
        diagonal=diagonal,
        P_inv=transpose(PinvT, m),
        Q_inv=Qinv,
    )


@dataclass(frozen=True)
class HermiteBasis:
    """Row-style Hermite normal form: positive pivots, entries above reduced."""

    H: list
    pivots: list


def hnf(A, ncols=None):
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    H = as_integer_matrix(A)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            live = [i for i in range(r, m) if H[i][c]]
            if not live:
                break
            i0 = min(live, key=lambda i: abs(H[i][c]))
            H[r], H[i0] = H[i0], H[r]
            p = H[r][c]
            pr = H[r]
            clean = True
            for i in range(r + 1, m):
                v = H[i][c]
                if v:
                    q = v // p
                    H[i] = [a - q * b for a, b in zip(H[i], pr)]
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if not H[r][c]:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
        p = H[r][c]
        pr = H[r]
        for k in range(r):
            q = H[k][c] // p
            if q:
                H[k] = [a - q * b for a, b in zip(H[k], pr)]
        pivots.append(c)
        r += 1
    return HermiteBasis(H=H[:r], pivots=pivots)
