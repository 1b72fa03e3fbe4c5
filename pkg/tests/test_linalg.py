from fractions import Fraction
import random

import sympy
from sympy.matrices.normalforms import smith_normal_form

from dsperfect.linalg import (
    determinant, hermite_basis, inverse, lll_gram, mat_mul, nullspace, rank, smith_form, solve, transpose,
)


def test_determinant_and_inverse_of_a2():
    G = [[2, 1], [1, 2]]
    assert determinant(G) == 3
    assert inverse(G) == [[Fraction(2, 3), Fraction(-1, 3)], [Fraction(-1, 3), Fraction(2, 3)]]


def test_smith_form_matches_sympy():
    rng = random.Random(7)
    for _ in range(20):
        A = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        if determinant(A) == 0:
            continue
        diag, U, V = smith_form(A)
        assert mat_mul(mat_mul(U, A), V) == [[diag[i] if i == j else 0 for j in range(4)] for i in range(4)]
        expected = smith_normal_form(sympy.Matrix(A), domain=sympy.ZZ)
        assert [abs(d) for d in diag] == [abs(int(expected[i, i])) for i in range(4)]
        for a, b in zip(diag, diag[1:]):
            assert b % a == 0


def test_hermite_basis_of_index_three_sublattice():
    basis = hermite_basis([[3, 0], [1, 1], [0, 3]])
    assert len(basis) == 2
    assert abs(determinant(basis)) == 3


def test_rank_nullspace_solve():
    A = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank(A) == 2
    N = nullspace(A)
    assert len(N) == 1
    assert all(sum(Fraction(a) * x for a, x in zip(row, N[0])) == 0 for row in A)
    assert solve([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


def test_lll_is_unimodular_change_of_basis():
    G = [[10, 7, 3], [7, 6, 2], [3, 2, 5]]
    T, Gr = lll_gram(G)
    assert abs(determinant(T)) == 1
    assert mat_mul(mat_mul(T, G), transpose(T)) == Gr
    assert determinant(Gr) == determinant(G)
