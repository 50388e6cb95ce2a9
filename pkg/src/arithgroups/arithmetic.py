"""T-sequences for the arithmetic subgroup G_L of a unipotent group."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .derived import (
    DerivedData,
    ErrorMapContext,
    GammaSplit,
    build_derived,
    derived_action,
    dpi,
    gamma_split,
    n_lattice_basis,
    preimage_dpi,
)
from .errors import InconsistencyError, InvalidLieAlgebraError, NotNilpotentError
from .exact_linalg import (
    det,
    flatten,
    hnf,
    identity,
    inverse,
    is_identity,
    is_integral,
    linear_combination,
    matmul,
    rank,
    scale,
    solve_left,
    solve_left_many,
    transpose,
)
from .lattice import Lattice, integral_relations
from .nilpotent import (
    Flag,
    LieAlgebraRep,
    bracket,
    check_flag,
    check_rep,
    compute_flag,
    exp_nilpotent,
    is_unipotent,
    log_unipotent,
)


@dataclass(frozen=True)
class RelationLattice:
    """Hermite basis of the relations of ``u_1..u_k`` modulo Γ + W'."""

    basis: list
    pivots: list
    psi_rows: list


@dataclass
class LevelRecord:
    """What one level of the recursion computed, kept for membership and checks.

    Matrices are in the adapted coordinates of the level unless the name
    says otherwise.  ``q_generators`` is the T-sequence found one level
    down, ``lifts[i]`` is the chosen preimage of ``log q_i`` and
    ``generators`` is the output of this level in its input coordinates.
    """

    depth: int
    dims: tuple
    data: DerivedData
    ctx: ErrorMapContext
    split: GammaSplit
    q_generators: list
    lifts: list
    relations: RelationLattice
    g_adapted: list
    n_logs: list
    generators: list

    @property
    def dim(self):
        return self.ctx.dim

    @property
    def k(self):
        return len(self.g_adapted)

    @property
    def l(self):
        return len(self.n_logs)


@dataclass
class TSequenceResult:
    generators: list
    lattice: Lattice
    algebra: LieAlgebraRep
    flag: Flag
    levels: list = field(default_factory=list)
    support_optimization: bool = True

    @property
    def hirsch_length(self):
        return len(self.generators)

    @property
    def level_sizes(self):
        return [(lv.k, lv.l) for lv in self.levels]


def _unipotent_power(x, e):
    """``exp(e x)`` for a nilpotent ``x``."""
    if e == 0:
        return identity(len(x))
    return exp_nilpotent(x if e == 1 else scale(e, x))


def _plus_identity(x):
    out = [list(row) for row in x]
    for i in range(len(out)):
        out[i][i] += 1
    return out


def kernel_relation_lattice(us, split):
    """Relation lattice of the flat error-map vectors ``us`` modulo Γ + W'."""
    if not us:
        return RelationLattice(basis=[], pivots=[], psi_rows=[])
    psi_rows = [split.psi(u) for u in us]
    k = len(us)
    if not psi_rows[0]:
        H = hnf(identity(k), k)
    else:
        H = hnf(integral_relations(psi_rows, len(psi_rows[0])), k)
    return RelationLattice(basis=H.H, pivots=H.pivots, psi_rows=psi_rows)


def split_error(u, split):
    """Write a flat vector of Γ + W' as ``v + γ`` with ``v`` in W' and ``γ`` in Γ.

    Returns ``(v, gamma, c)`` where ``c`` holds the coordinates of ``u`` over
    the split basis.  Raises :class:`InconsistencyError` if ``u`` is not in
    Γ + W'.
    """
    c = split.coordinates(u)
    m = split.m
    for x in c[m:]:
        if not isinstance(x, int):
            raise InconsistencyError(f"error map value is not in Γ + W' (coordinate {x})")
    gamma = [0] * len(u)
    for x, row in zip(c[m : len(split.cols)], split.local_basis[m:]):
        if x:
            for j, a in zip(split.cols, row):
                if a:
                    gamma[j] += x * a
    for j in split.rest:
        gamma[j] = u[j]
    v = [a - b for a, b in zip(u, gamma)]
    return v, gamma, c


def correction_step(w, lifts, ctx, split, n_logs):
    """The generator ``g_w exp(n_w)`` for one Hermite row ``w``.

    ``g_w`` is the product of ``exp(lift)^e`` over the row, and ``n_w`` is
    the element of n whose error map cancels the W' part of ``ε(g_w)``.
    Since ``n_logs[j]`` maps to the j-th basis vector of Γ ∩ W', that
    element is read off from the coordinates of the split.
    """
    D = ctx.dim
    g_w = identity(D)
    for e, x in zip(w, lifts):
        if e:
            g_w = matmul(g_w, _unipotent_power(x, e), D)
    u = ctx.flat(g_w)
    _, _, c = split_error(u, split)
    coeffs = [-x for x in c[: split.m]]
    if not any(coeffs):
        return g_w
    n_w = linear_combination(coeffs, n_logs)
    # n_w squares to zero, so exp(n_w) = I + n_w
    return [
        [a + b for a, b in zip(row, corr)]
        for row, corr in zip(g_w, matmul(g_w, n_w, D))
    ]


def _validate(g, flag):
    diag = check_rep(g)
    if not all(diag.nilpotent):
        raise NotNilpotentError("; ".join(diag.problems))
    if diag.problems:
        raise InvalidLieAlgebraError("; ".join(diag.problems))
    if flag is None:
        return compute_flag(g)
    check_flag(g, flag)
    return flag


def compute_generators(L, g, flag=None, support_optimization=True, validate=True):
    """A T-sequence for the group of elements of exp(g) that map ``L`` onto itself.

    ``L`` is a :class:`Lattice` (``None`` for the standard lattice), ``g`` a
    :class:`LieAlgebraRep` and ``flag`` an optional :class:`Flag`; when it is
    omitted the flag of iterated common kernels is used.  The generators come
    level by level: first those lifting the quotient, then the central ones.
    """
    if L is None:
        L = Lattice.standard(g.dim)
    if L.ambient_dim != g.dim:
        raise InvalidLieAlgebraError(
            f"lattice has dimension {L.ambient_dim} but the matrices are {g.dim}x{g.dim}"
        )
    if validate:
        flag = _validate(g, flag)
    elif flag is None:
        flag = compute_flag(g)
    levels = []
    gens = _solve(L, g, flag, support_optimization, 0, levels)
    return TSequenceResult(
        generators=gens,
        lattice=L,
        algebra=g,
        flag=flag,
        levels=levels,
        support_optimization=support_optimization,
    )


def _solve(L, g, flag, support_optimization, depth, levels):
    if flag.length == 1 or not g.basis:
        return []
    data, ctx = build_derived(L, g, flag, support_optimization)
    slot = len(levels)
    levels.append(None)
    q_gens = _solve(data.lstar, data.q_basis, data.derived_flag, support_optimization, depth + 1, levels)

    split = gamma_split(ctx, data.n_image_basis)
    n_logs = n_lattice_basis(data, ctx, split)
    lifts = []
    for q in q_gens:
        try:
            lifts.append(preimage_dpi(data, log_unipotent(q)))
        except ValueError as exc:
            raise InconsistencyError(f"cannot lift a quotient generator: {exc}") from exc
    us = [ctx.flat(exp_nilpotent(x)) for x in lifts]
    rel = kernel_relation_lattice(us, split)
    g_adapted = [correction_step(w, lifts, ctx, split, n_logs) for w in rel.basis]
    n_gens = [_plus_identity(x) for x in n_logs]
    out = [ctx.from_adapted(h) for h in g_adapted + n_gens]
    levels[slot] = LevelRecord(
        depth=depth,
        dims=flag.dims,
        data=data,
        ctx=ctx,
        split=split,
        q_generators=q_gens,
        lifts=lifts,
        relations=rel,
        g_adapted=g_adapted,
        n_logs=n_logs,
        generators=out,
    )
    return out


def _lattice_matrix(g, L):
    """Matrix of ``g`` in the basis of ``L`` (basis vectors are the rows of ``L.basis``)."""
    if L.is_standard:
        return g
    B = transpose(L.basis)
    return matmul(matmul(inverse(B), g, len(g)), B, len(g))


def preserves_lattice(g, L):
    M = _lattice_matrix(g, L)
    return is_integral(M) and abs(det(M)) == 1


def member(g, result):
    """Exponents ``e`` with ``g = t_1^e_1 ... t_r^e_r`` over the result's generators.

    Returns ``None`` when ``g`` is not in the group they generate.  Raises
    ``ValueError`` for a matrix of the wrong shape or one that is not
    unipotent.
    """
    D = result.algebra.dim
    if len(g) != D or any(len(row) != D for row in g):
        raise ValueError(f"expected a {D}x{D} matrix")
    if not is_unipotent(g):
        raise ValueError("matrix is not unipotent")
    if not preserves_lattice(g, result.lattice):
        return None
    gens = result.generators
    r = len(gens)
    if r == 0:
        return [] if is_identity(g) else None
    logs = [log_unipotent(t) for t in gens]
    flat_logs = [flatten(x) for x in logs]
    # The logs of t_i..t_r span the Lie algebra of the hull of <t_i..t_r>,
    # an ideal containing all commutators with t_1..t_{i-1}.  So the
    # coefficient of log t_i in log x is the exponent of t_i in x.
    exps = []
    x = g
    for i in range(r):
        c = solve_left(flat_logs, flatten(log_unipotent(x)))
        if c is None or any(c[:i]):
            return None
        e = c[i]
        if not isinstance(e, int):
            if Fraction(e).denominator != 1:
                return None
            e = int(e)
        exps.append(e)
        if e:
            x = matmul(_unipotent_power(logs[i], -e), x, D)
    return exps if is_identity(x) else None


def word(exponents, generators):
    """The product ``t_1^e_1 ... t_r^e_r``."""
    D = len(generators[0]) if generators else 0
    out = identity(D)
    for e, t in zip(exponents, generators):
        if e:
            out = matmul(out, _unipotent_power(log_unipotent(t), e), D)
    return out


@dataclass
class VerificationReport:
    lattice_preserved: bool
    hirsch_length: bool
    log_span: bool
    central: bool
    details: list = field(default_factory=list)

    @property
    def passed(self):
        return self.lattice_preserved and self.hirsch_length and self.log_span and self.central

    def as_dict(self):
        return {
            "lattice_preserved": self.lattice_preserved,
            "hirsch_length": self.hirsch_length,
            "log_span": self.log_span,
            "central": self.central,
            "passed": self.passed,
            "details": list(self.details),
        }


def verify_generators(gens, L, g, central_groups=()):
    """Check a list of generators against ``L`` and ``g``.

    ``central_groups`` lists ``(generators, k)`` pairs: in each, the
    generators from position ``k`` on must commute with all of them.
    """
    details = []
    bad = [i for i, t in enumerate(gens) if not preserves_lattice(t, L)]
    if bad:
        details.append(f"generators {bad} do not preserve the lattice")

    hirsch = len(gens) == len(g)
    if not hirsch:
        details.append(f"{len(gens)} generators but dim g = {len(g)}")

    log_span = True
    try:
        logs = [flatten(log_unipotent(t)) for t in gens]
    except NotNilpotentError:
        logs = None
        log_span = False
        details.append("a generator is not unipotent")
    if logs:
        basis = [flatten(X) for X in g.basis]
        inside = solve_left_many(basis, logs, ncols=g.dim**2) if basis else [None]
        if any(c is None for c in inside):
            log_span = False
            details.append("a generator is not the exponential of an element of g")
        elif rank(logs) != len(basis):
            log_span = False
            details.append("logs of the generators do not span g")
    elif logs is not None and g.basis:
        log_span = False
        details.append("no generators but g is non-zero")

    central = True
    for depth, (level_gens, k) in enumerate(central_groups):
        D = len(level_gens[0]) if level_gens else 0
        for n in level_gens[k:]:
            for t in level_gens:
                if matmul(n, t, D) != matmul(t, n, D):
                    central = False
        if not central:
            details.append(f"a central generator of level {depth} does not commute")
            break
    return VerificationReport(not bad, hirsch, log_span, central, details)


def verify(result, L=None, g=None):
    """Check lattice preservation, Hirsch length, log-span and centrality."""
    L = result.lattice if L is None else L
    g = result.algebra if g is None else g
    groups = [(lv.generators, lv.k) for lv in result.levels]
    return verify_generators(result.generators, L, g, groups)


def _random_element(rng, basis, D, denominators=(1, 2, 3)):
    if not basis:
        return [[0] * D for _ in range(D)]
    coeffs = [Fraction(rng.randint(-4, 4), rng.choice(denominators)) for _ in basis]
    return linear_combination(coeffs, basis)


def structural_checks(result, samples=2, seed=0):
    """Randomised checks of the identities the algorithm relies on, per level.

    Returns a dict mapping check name to the list of failures (empty when
    everything holds).
    """
    rng = random.Random(seed)
    failures = {
        "epsilon_additive": [],
        "epsilon_exp": [],
        "central": [],
        "dpi_exp": [],
        "projection": [],
        "epsilon_in_gamma": [],
        "support": [],
    }
    for lv in result.levels:
        data, ctx = lv.data, lv.ctx
        D = ctx.dim
        tag = f"level {lv.depth}"
        gens_g = data.g_adapted
        gens_n = data.n_adapted
        for X in gens_g:
            for Y in gens_n:
                if any(any(row) for row in bracket(X, Y)):
                    failures["central"].append(tag)
        for _ in range(samples):
            x = _random_element(rng, gens_g, D)
            y = _random_element(rng, gens_n, D)
            gx, hy = exp_nilpotent(x), exp_nilpotent(y)
            lhs = ctx.block(matmul(gx, hy, D))
            rhs = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(ctx.block(gx), ctx.block(hy))]
            if lhs != rhs:
                failures["epsilon_additive"].append(tag)
            if ctx.block(hy) != ctx.block(y):
                failures["epsilon_exp"].append(tag)
            if derived_action(gx, data.coords) != exp_nilpotent(dpi(x, data.coords)):
                failures["dpi_exp"].append(tag)
        for w, gi in zip(lv.relations.basis, lv.g_adapted):
            h = identity(data.vstar_dim)
            for e, q in zip(w, lv.q_generators):
                if e:
                    h = matmul(h, _unipotent_power(log_unipotent(q), e), data.vstar_dim)
            if derived_action(gi, data.coords) != h:
                failures["projection"].append(tag)
        for gi in lv.g_adapted + [_plus_identity(x) for x in lv.n_logs]:
            if not is_integral(ctx.block(gi)):
                failures["epsilon_in_gamma"].append(tag)
            try:
                ctx.flat(gi, strict=True)
            except InconsistencyError:
                failures["support"].append(tag)
    return failures
