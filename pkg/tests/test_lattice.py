import random
from fractions import Fraction

import pytest

from arithgroups.exact_linalg import hnf, identity, rank, snf
from arithgroups.lattice import (
    Lattice,
    flag_adapted_basis,
    integral_relations,
    intersect_lattice_subspace,
    l_complements,
    saturate,
)
from oracles import box, in_integer_span, in_rational_span, rank_rational


def same_lattice(A, B):
    return all(in_integer_span(B, a) for a in A) and all(in_integer_span(A, b) for b in B)


def test_saturate_examples():
    out = saturate([[2, 0, 0], [0, 3, 0]])
    assert same_lattice(out, [[1, 0, 0], [0, 1, 0]])
    assert saturate(identity(3)) == identity(3) or same_lattice(saturate(identity(3)), identity(3))
    assert saturate([[2, 2]]) in ([[1, 1]], [[-1, -1]])


def test_saturate_output_has_unit_smith_form():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 4)
        m = rng.randint(1, n)
        A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        if rank(A) < m:
            continue
        B = saturate(A)
        assert snf(B, n).diagonal == [1] * m
        assert rank_rational(B + A) == m


def test_saturate_rejects_dependent_rows():
    with pytest.raises(ValueError):
        saturate([[1, 2], [2, 4]])


def test_intersect_examples():
    C = intersect_lattice_subspace(identity(2), [[1, 1]])
    assert C[0] in ([1, 1], [-1, -1])
    C = intersect_lattice_subspace(identity(2), [[Fraction(1, 2), Fraction(1, 2)]])
    assert C[0] in ([1, 1], [-1, -1])
    assert same_lattice(intersect_lattice_subspace(identity(3), identity(3)), identity(3))


def test_l_complements_worked_example():
    V1 = [[1, 0, 0, 0], [0, 1, 0, 0]]
    V2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    ad = l_complements(identity(4), V1, V2)
    assert (ad.s, ad.t) == (2, 3)
    check_complements(identity(4), V1, V2, ad)
    assert rank_rational(ad.wn1 + [[0, 0, 0, 1]]) == 1
    assert rank_rational(ad.w1 + [[0, 0, 1, 0], [0, 0, 0, 1]]) == 2


def test_l_complements_small_lattice():
    A = [[2, 0], [1, 1]]
    ad = l_complements(A, [[1, 0]], [[1, 0]])
    assert ad.rows[0] in ([2, 0], [-2, 0])
    check_complements(A, [[1, 0]], [[1, 0]], ad)
    ad = l_complements(identity(2), [[1, 0]], [[1, 0]])
    assert (ad.s, ad.t) == (1, 1)


def test_l_complements_rejects_non_nested():
    with pytest.raises(ValueError):
        l_complements(identity(3), [[0, 0, 1]], [[1, 0, 0], [0, 1, 0]])


def check_complements(A, V1, Vn1, ad, radius=3):
    """All six conditions of a system of L-complements, with box checks."""
    n = len(A)
    rows = ad.rows
    assert same_lattice(rows, A)
    assert rank_rational(ad.v1 + list(V1)) == len(V1) == ad.s
    assert rank_rational(ad.vn1 + list(Vn1)) == len(Vn1) == ad.t
    assert rank_rational(ad.v1 + ad.w1) == n
    assert rank_rational(ad.vn1 + ad.wn1) == n
    # W_{n-1} inside W_1 holds by construction: its rows are a suffix
    for sub, space in ((ad.v1, V1), (ad.vn1, Vn1)):
        for c in box(n, radius):
            p = [sum(ci * a[j] for ci, a in zip(c, A)) for j in range(n)]
            if in_rational_span(space, p):
                assert in_integer_span(sub, p)


def test_l_complements_random_against_box():
    rng = random.Random(5)
    count = 0
    while count < 15:
        n = 3
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if rank(A) < n:
            continue
        Vn1 = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(2)]
        if rank(Vn1) < 2:
            continue
        c = [rng.randint(-2, 2) for _ in range(2)]
        V1 = [[c[0] * a + c[1] * b for a, b in zip(*Vn1)]]
        if not any(V1[0]):
            continue
        check_complements(A, V1, Vn1, l_complements(A, V1, Vn1), radius=2)
        count += 1


def test_flag_adapted_basis_prefixes():
    A = [[1, 1, 0], [0, 2, 0], [1, 0, 3]]
    spaces = [[[1, 0, 0]], [[1, 0, 0], [0, 1, 0]], identity(3)]
    rows = flag_adapted_basis(A, spaces)
    assert same_lattice(rows, A)
    for k, space in enumerate(spaces[:-1]):
        d = len(space)
        for c in box(3, 3):
            p = [sum(ci * a[j] for ci, a in zip(c, A)) for j in range(3)]
            if in_rational_span(space, p):
                assert in_integer_span(rows[:d], p)


@pytest.mark.parametrize(
    "A, expected",
    [([[Fraction(1, 2)]], [[2]]), (identity(3), identity(3)), ([[Fraction(1, 2), Fraction(1, 3)]], [[6]])],
)
def test_integral_relations_examples(A, expected):
    out = integral_relations(A)
    assert hnf(out, len(A)).H == expected


def test_lattice_type():
    L = Lattice([[2, 0], [1, 1]])
    assert [1, 1] in L and [1, 0] not in L
    assert Lattice.standard(3).is_standard
    with pytest.raises(ValueError):
        Lattice([[1, 2], [2, 4]])


# ---- brute-force oracle comparisons over a box (dimensions <= 3, entries <= 5)


def _random_independent(rng, m, n, lo=-5, hi=5, denominators=(1,)):
    while True:
        A = [[Fraction(rng.randint(lo, hi), rng.choice(denominators)) for _ in range(n)] for _ in range(m)]
        if rank_rational(A) == m:
            return A


def saturate_oracle_case(rng, radius=4):
    n = rng.randint(1, 3)
    m = rng.randint(1, n)
    A = [[int(v) for v in row] for row in _random_independent(rng, m, n)]
    B = saturate(A)
    for p in box(n, radius):
        assert in_rational_span(A, p) == in_integer_span(B, p)


def intersect_oracle_case(rng, radius=4):
    n = rng.randint(1, 3)
    m = rng.randint(1, n)
    A = [[int(v) for v in row] for row in _random_independent(rng, n, n)]
    B = _random_independent(rng, m, n, denominators=(1, 2, 3))
    C = intersect_lattice_subspace(A, B)
    assert same_lattice(C, A)
    for c in box(n, radius):
        p = [sum(ci * a[j] for ci, a in zip(c, A)) for j in range(n)]
        assert in_rational_span(B, p) == in_integer_span(C[:m], p)


def relations_oracle_case(rng, radius=5):
    m = rng.randint(1, 3)
    n = rng.randint(1, 3)
    A = [[Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(n)] for _ in range(m)]
    E = integral_relations(A)
    assert len(E) == m
    for e in box(m, radius):
        integral = all(sum(ei * A[i][j] for i, ei in enumerate(e)).denominator == 1 for j in range(n))
        assert integral == in_integer_span(E, e)


def test_saturate_matches_oracle():
    rng = random.Random(21)
    for _ in range(40):
        saturate_oracle_case(rng)


def test_intersect_matches_oracle():
    rng = random.Random(22)
    for _ in range(40):
        intersect_oracle_case(rng)


def test_integral_relations_match_oracle():
    rng = random.Random(23)
    for _ in range(40):
        relations_oracle_case(rng)
