from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discrete_racah import OperatorMatrix, SimplexGrid, racah_table
from discrete_racah.errors import DimensionError
from discrete_racah.matrix import charpoly, commutator, divide_linear, exact_matmul, rank

from conftest import params


@pytest.mark.parametrize("n, N", [(3, 0), (3, 10), (4, 5), (4, 6), (5, 5)])
def test_grid_size(n, N):
    grid = SimplexGrid(params(n, N))
    assert len(grid) == comb(N + n - 2, n - 2)
    assert grid.points == tuple(sorted(grid.points))
    assert all(0 <= p[0] and all(a <= b for a, b in zip(p, p[1:])) and p[-1] <= N for p in grid.points)


def test_rank_two_sizes_are_not_the_quoted_ones():
    # C(N+2, 2): the simplex at n=4 has 21 points for N=5 and 28 for N=6
    assert len(SimplexGrid(params(4, 5))) == 21
    assert len(SimplexGrid(params(4, 6))) == 28
    assert len(SimplexGrid(params(5, 5))) == 56


def test_multi_indices_biject_onto_simplex():
    grid = SimplexGrid(params(5, 3))
    ks = grid.multi_indices()
    assert len(set(ks)) == len(ks)
    assert all(min(k) >= 0 and sum(k) <= 3 for k in ks)
    assert grid.extended((1, 2, 2)) == (0, 1, 2, 2, 3)


def test_racah_table_first_row_is_one():
    ks, R = racah_table(SimplexGrid(params(3, 4)))
    assert ks[0] == (0,)
    assert all(v == 1 for v in R[0])


def _random_matrix(data, size):
    vals = data.draw(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=size * size, max_size=size * size))
    return np.array(vals, dtype=object).reshape(size, size)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_exact_matmul_matches_naive(data):
    a, b = _random_matrix(data, 4), _random_matrix(data, 4)
    assert np.all(exact_matmul(a, b) == a.dot(b))


def test_operator_matrix_algebra():
    grid = SimplexGrid(params(3, 3))
    D = OperatorMatrix.diagonal(grid, [1, 2, 3, 4])
    Z = OperatorMatrix.zero(grid)
    assert commutator(D, D).is_zero()
    assert (D @ OperatorMatrix.identity(grid)) == D
    assert D.scalar_value() is None
    assert OperatorMatrix.identity(grid, Fraction(3, 2)).scalar_value() == Fraction(3, 2)
    assert D.is_diagonal() and Z.first_nonzero() is None
    assert (D - D).is_zero() and (-D + D).is_zero()
    assert list(D.dot([1, 1, 1, 1])) == [1, 2, 3, 4]
    with pytest.raises(DimensionError):
        D @ OperatorMatrix.zero(SimplexGrid(params(3, 4)))


def test_operator_matrix_json_round_trip():
    grid = SimplexGrid(params(3, 2))
    M = OperatorMatrix(grid, np.array([[Fraction(1, 3), 0, 0], [2, 0, Fraction(-5, 7)], [0, 0, 1]], dtype=object))
    text = M.to_json()
    assert text == '{"grid":{"N":2,"beta":["1/3","5/3","10/3"],"n":3},"rows":[[[0,"1/3"]],[[0,"2"],[2,"-5/7"]],[[2,"1"]]]}'
    assert OperatorMatrix.from_json(text) == M


def test_charpoly_and_division():
    A = np.array([[2, 1, 0], [1, 3, 1], [0, 1, 4]], dtype=object)
    A = np.vectorize(Fraction, otypes=[object])(A)
    # det(tI - A) = t^3 - 9 t^2 + 24 t - 18
    assert charpoly(A) == [-18, 24, -9, 1]
    q, r = divide_linear([-6, 11, -6, 1], 1)
    assert (q, r) == ([6, -5, 1], 0)
    assert divide_linear([-6, 11, -6, 1], 4)[1] == 6
    assert rank(A) == 3
    assert rank(np.array([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], dtype=object)) == 1


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_charpoly_similarity_invariant(data):
    A = _random_matrix(data, 4)
    P = np.vectorize(Fraction, otypes=[object])(np.array([[1, 2, 0, 0], [0, 1, 3, 0], [0, 0, 1, -1], [1, 0, 0, 1]]))
    Pinv = np.vectorize(Fraction, otypes=[object])(np.round(np.linalg.inv(P.astype(float)) * 7).astype(int)) / 7
    assert np.all(P.dot(Pinv) == np.eye(4))
    assert charpoly(A) == charpoly(P.dot(A).dot(Pinv))
