import itertools
import random
from fractions import Fraction
from math import lcm

import pytest

from arithgroups.arithmetic import (
    TSequenceResult,
    compute_generators,
    correction_step,
    kernel_relation_lattice,
    member,
    preserves_lattice,
    split_error,
    structural_checks,
    verify,
    word,
)
from arithgroups.derived import GammaSplit, build_derived, gamma_split
from arithgroups.errors import FlagError, InconsistencyError, InvalidLieAlgebraError, NotNilpotentError
from arithgroups.examples import abelian_example, unit, worked_example, worked_example_elements
from arithgroups.exact_linalg import inverse, linear_combination, matmul, transpose
from arithgroups.families import g_family, h_family
from arithgroups.lattice import Lattice
from arithgroups.nilpotent import Flag, LieAlgebraRep, compute_flag, exp_nilpotent, log_unipotent
from oracles import identity, random_unimodular


def I(n):
    return identity(n)


def test_zero_algebra():
    res = compute_generators(None, LieAlgebraRep(3, []))
    assert res.generators == []
    assert member(I(3), res) == []
    assert member(exp_nilpotent(unit(3, 1, 2)), res) is None


def test_input_validation():
    with pytest.raises(NotNilpotentError):
        compute_generators(None, LieAlgebraRep(2, [[[1, 0], [0, 0]]]))
    with pytest.raises(InvalidLieAlgebraError):
        # e12 and e23 do not close under the bracket
        compute_generators(None, LieAlgebraRep(3, [unit(3, 1, 2), unit(3, 2, 3)]))
    with pytest.raises(FlagError):
        compute_generators(None, abelian_example(), Flag.coordinate(3, (1, 3)))
    with pytest.raises(InvalidLieAlgebraError):
        compute_generators(Lattice.standard(2), abelian_example())


def test_kernel_relation_lattice_examples():
    split = GammaSplit.from_subspace(2, [[1, 0]])
    rel = kernel_relation_lattice([[Fraction(1, 2), 1], [3, 0]], split)
    assert rel.basis == [[1, 0], [0, 1]]
    split = GammaSplit.from_subspace(2, [])
    rel = kernel_relation_lattice([[Fraction(1, 3), 0]], split)
    assert rel.basis == [[3]]
    rel = kernel_relation_lattice([[Fraction(1, 2), 0], [0, Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]], split)
    assert rel.basis == [[1, 1, 1], [0, 2, 0], [0, 0, 2]]


def test_split_error_example():
    split = GammaSplit.from_subspace(2, [[1, 0]])
    v, gamma, _ = split_error([Fraction(1, 2), 1], split)
    assert v == [Fraction(1, 2), 0]
    assert gamma == [0, 1]
    with pytest.raises(InconsistencyError):
        split_error([0, Fraction(1, 2)], split)


def test_correction_step_on_worked_example():
    g = worked_example()
    data, ctx = build_derived(Lattice.standard(4), g, compute_flag(g))
    split = gamma_split(ctx, data.n_image_basis)
    el = worked_example_elements()
    # lift of q1 is e13, whose error map is (0, 0): no correction
    x1 = ctx.to_adapted(unit(4, 1, 3))
    n_log = [ctx.to_adapted(unit(4, 1, 4))]
    out = correction_step([1, 0], [x1, ctx.to_adapted(log_unipotent(el["g2"]))], ctx, split, n_log)
    assert ctx.from_adapted(out) == el["g1"]
    # g2^2 already preserves the lattice
    out = correction_step([0, 2], [x1, ctx.to_adapted(log_unipotent(el["g2"]))], ctx, split, n_log)
    assert ctx.from_adapted(out) == matmul(el["g2"], el["g2"])


def test_worked_example_generators():
    res = compute_generators(None, worked_example())
    el = worked_example_elements()
    g2sq = matmul(el["g2"], el["g2"])
    assert res.generators == [el["g1"], g2sq, el["n"]]
    assert res.level_sizes == [(2, 1), (0, 2)]
    assert res.levels[0].relations.basis == [[1, 0], [0, 2]]
    assert member(el["n"], res) == [0, 0, 1]
    assert member(el["g1"], res) == [1, 0, 0]
    assert member(g2sq, res) == [0, 1, 0]
    assert member(el["g2"], res) is None
    assert member(exp_nilpotent(unit(4, 1, 4, Fraction(1, 2))), res) is None


def test_member_rejects_bad_input():
    res = compute_generators(None, worked_example())
    with pytest.raises(ValueError):
        member(I(3), res)
    with pytest.raises(ValueError):
        member([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], res)
    # unipotent and integral but outside exp(g)
    assert member(exp_nilpotent(unit(4, 1, 2)), res) is None


def test_verify_detects_corruption():
    res = compute_generators(None, worked_example())
    assert verify(res).passed
    bad = TSequenceResult(
        generators=[res.generators[0], res.generators[1], exp_nilpotent(unit(4, 1, 4, Fraction(1, 2)))],
        lattice=res.lattice,
        algebra=res.algebra,
        flag=res.flag,
        levels=[],
        support_optimization=True,
    )
    rep = verify(bad)
    assert not rep.lattice_preserved and rep.log_span and rep.hirsch_length
    short = TSequenceResult(res.generators[:2], res.lattice, res.algebra, res.flag, [], True)
    rep = verify(short)
    assert not rep.hirsch_length and not rep.log_span


def test_word_member_roundtrip():
    rng = random.Random(4)
    for g in (worked_example(), g_family(5), h_family(5)):
        res = compute_generators(None, g)
        for _ in range(15):
            e = [rng.randint(-3, 3) for _ in res.generators]
            assert member(word(e, res.generators), res) == e


def test_support_optimization_does_not_change_result_shape():
    for g in (worked_example(), g_family(5), h_family(6)):
        a = compute_generators(None, g)
        b = compute_generators(None, g, support_optimization=False)
        assert a.level_sizes == b.level_sizes
        assert verify(b).passed
        for t in b.generators:
            assert member(t, a) is not None
        for t in a.generators:
            assert member(t, b) is not None


def _log_grid_denominator(res):
    den = 1
    coords = res.algebra.coordinates([log_unipotent(t) for t in res.generators])
    for c in coords:
        for v in c:
            den = lcm(den, Fraction(v).denominator)
    return den


def grid_oracle(res, radius):
    """Compare lattice preservation with membership on a grid in exp(g)."""
    den = _log_grid_denominator(res)
    basis = res.algebra.basis
    values = [Fraction(a, den) for a in range(-radius * den, radius * den + 1)]
    hits = 0
    for coeffs in itertools.product(values, repeat=len(basis)):
        u = exp_nilpotent(linear_combination(list(coeffs), basis))
        inside = preserves_lattice(u, res.lattice)
        e = member(u, res)
        assert inside == (e is not None)
        if e is not None:
            assert word(e, res.generators) == u
            hits += 1
    return hits


def conjugate(g, P):
    Pi = inverse(P)
    return LieAlgebraRep(g.dim, [matmul(matmul(P, X), Pi) for X in g.basis])


def test_grid_oracle_worked_example():
    assert grid_oracle(compute_generators(None, worked_example()), 1) > 5


def test_grid_oracle_conjugated():
    rng = random.Random(21)
    P = random_unimodular(rng, 4, 4)
    g = conjugate(worked_example(), P)
    assert grid_oracle(compute_generators(None, g), 1) > 5


def test_grid_oracle_nonstandard_lattice():
    L = Lattice([[1, 0, 0, 0], [0, 2, 0, 0], [0, 1, 3, 0], [1, 0, 0, 2]])
    res = compute_generators(L, worked_example())
    assert verify(res).passed
    assert grid_oracle(res, 1) > 1


def test_grid_oracle_h4():
    assert grid_oracle(compute_generators(None, h_family(4)), 1) > 10


def test_nonstandard_lattice_equals_conjugated_standard():
    # Γ for (g, P Z^n) is P Γ' P^{-1} where Γ' is the group for (P^{-1} g P, Z^n)
    rng = random.Random(5)
    P = random_unimodular(rng, 4, 3)
    for i in range(4):
        P[i][i] *= 1 if i else 2
    L = Lattice(transpose(P))
    g = worked_example()
    res = compute_generators(L, g)
    Pi = inverse(P)
    ref = compute_generators(None, conjugate(g, Pi))
    for t in res.generators:
        assert member(matmul(matmul(Pi, t), P), ref) is not None
    for t in ref.generators:
        assert member(matmul(matmul(P, t), Pi), res) is not None


@pytest.mark.parametrize("g", [worked_example(), g_family(6), h_family(6), abelian_example()])
def test_structural_checks_clean(g):
    res = compute_generators(None, g)
    assert all(not v for v in structural_checks(res).values())
