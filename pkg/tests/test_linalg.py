from fractions import Fraction as F
from math import lcm

import sympy as sp
from hypothesis import given, strategies as st

from nefpart.linalg import (
    clear_denominators,
    in_lattice,
    int_rank,
    integer_kernel,
    inverse,
    matmul,
    nullspace,
    primitive,
    rank,
    rref,
    smith_normal_form,
    solve,
)

small = st.integers(-6, 6)


def matrices(max_rows=5, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def test_primitive_and_denominators():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((0, 0)) == (0, 0)
    assert clear_denominators((F(1, 2), F(-1, 3))) == (3, -2)


def test_rref_small():
    rows, piv = rref([[2, 4], [1, 2]])
    assert piv == [0]
    assert rows[0] == [1, 2]


def test_snf_identity_and_diag():
    _, d, _ = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert d == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    _, d, _ = smith_normal_form([[2, 0], [0, 3]])
    assert d == [[1, 0], [0, 6]]


@given(matrices())
def test_rank_matches_sympy(a):
    assert rank(a) == sp.Matrix(a).rank()
    assert int_rank(a) == sp.Matrix(a).rank()


@given(matrices())
def test_snf_certificate(a):
    u, d, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(sp.Matrix(u).det()) == 1 and abs(sp.Matrix(v).det()) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz  # nonzero entries first
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_snf_random_5x7():
    import random

    rng = random.Random(11)
    a = [[rng.randint(-9, 9) for _ in range(7)] for _ in range(5)]
    u, d, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d


@given(matrices())
def test_nullspace_and_kernel(a):
    n = len(a[0])
    basis = nullspace(a, n)
    assert len(basis) == n - sp.Matrix(a).rank()
    for v in basis:
        assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in a)
    ker = integer_kernel(a, n)
    assert len(ker) == len(basis)
    # saturation: any integer kernel vector is an integer combination of the basis
    for v in sp.Matrix(a).nullspace():
        den = lcm(*[int(sp.fraction(x)[1]) for x in v])
        w = [int(x * den) for x in v]
        g = 0
        for x in w:
            g = sp.igcd(g, x)
        assert in_lattice(ker, [x // g for x in w])


def test_solve_and_inverse():
    assert solve([[1, 1], [1, -1]], [3, 1]) == (2, 1)
    assert solve([[1, 1], [2, 2]], [1, 3]) is None
    assert inverse([[2, 1], [1, 1]]) == [[1, -1], [-1, 2]]
