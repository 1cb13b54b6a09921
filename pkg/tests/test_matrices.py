"""Smith normal form and sparse matrix invariants."""
import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from strathom.exact_algebra import (IntMatrix, kernel_basis,
                                    kernel_basis_mod_p, random_sparse,
                                    rank_mod_p, smith, solve)
from strathom.exact_algebra.matrices import solve_mod_p


def assert_valid_snf(A):
    sd = smith(A)
    D = sd.U * A * sd.V
    for (i, j), v in D.entries.items():
        assert i == j and i < sd.rank
    for k, d in enumerate(sd.diagonal):
        assert d > 0
        assert D[(k, k)] == d
        if k:
            assert d % sd.diagonal[k - 1] == 0
    assert abs(sd.U.det()) == 1
    assert abs(sd.V.det()) == 1
    return sd


def test_smith_2x2_example():
    sd = assert_valid_snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert sd.diagonal == (2, 4)


def test_smith_identity():
    sd = assert_valid_snf(IntMatrix.identity(3))
    assert sd.diagonal == (1, 1, 1)


def test_smith_zero_1x1():
    sd = assert_valid_snf(IntMatrix.zero(1, 1))
    assert sd.diagonal == ()
    assert sd.rank == 0


def minor_gcd(A, k):
    """gcd of all k x k minors, brute force."""
    g = 0
    dense = A.to_dense()
    for rows in combinations(range(A.rows), k):
        for cols in combinations(range(A.cols), k):
            sub = IntMatrix.from_rows([[dense[i][j] for j in cols] for i in rows])
            g = gcd(g, sub.det())
    return abs(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 10 ** 6))
def test_smith_invariants_random(r, c, seed):
    rng = random.Random(seed)
    A = IntMatrix(r, c, {(i, j): rng.randint(-9, 9) for i in range(r)
                         for j in range(c) if rng.random() < 0.7})
    sd = assert_valid_snf(A)
    # product of the first k factors equals the gcd of k x k minors
    for k in range(1, min(3, sd.rank) + 1):
        prod = 1
        for d in sd.diagonal[:k]:
            prod *= d
        assert prod == minor_gcd(A, k)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10 ** 6))
def test_smith_matches_sympy(r, c, seed):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form
    rng = random.Random(seed)
    A = IntMatrix(r, c, {(i, j): rng.randint(-9, 9) for i in range(r)
                         for j in range(c) if rng.random() < 0.7})
    sd = smith(A, need_U=False, need_V=False)
    S = smith_normal_form(sympy.Matrix(A.to_dense()))
    reference = sorted(abs(S[i, i]) for i in range(min(r, c)) if S[i, i])
    assert reference == sorted(sd.diagonal)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10 ** 6))
def test_kernel_and_solve(r, c, seed):
    rng = random.Random(seed)
    A = IntMatrix(r, c, {(i, j): rng.randint(-5, 5) for i in range(r)
                         for j in range(c) if rng.random() < 0.7})
    K = kernel_basis(A)
    assert (A * K).is_zero()
    # saturation: SNF of a kernel basis has unit diagonal
    if K.cols:
        assert all(d == 1 for d in smith(K, False, False).diagonal)
    X = IntMatrix(c, 1, {(i, 0): rng.randint(-3, 3) for i in range(c)})
    B = A * X
    Xs = solve(A, B)
    assert Xs is not None and A * Xs == B


def test_solve_no_solution():
    A = IntMatrix.from_rows([[2]])
    B = IntMatrix.from_rows([[1]])
    assert solve(A, B) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.sampled_from([2, 3, 5]),
       st.integers(0, 10 ** 6))
def test_mod_p_kernel_rank(r, c, p, seed):
    rng = random.Random(seed)
    A = IntMatrix(r, c, {(i, j): rng.randint(-6, 6) for i in range(r)
                         for j in range(c) if rng.random() < 0.6})
    K = kernel_basis_mod_p(A, p)
    AK = A * K
    assert all(v % p == 0 for v in AK.entries.values())
    assert rank_mod_p(A, p) + K.cols == c
    X = IntMatrix(c, 1, {(i, 0): rng.randint(0, p - 1) for i in range(c)})
    B = A * X
    Xs = solve_mod_p(A, B, p)
    assert Xs is not None
    diff = A * Xs - B
    assert all(v % p == 0 for v in diff.entries.values())


def test_triplet_roundtrip():
    A = random_sparse(7, 5, 0.4, seed=11, lo=-9, hi=9)
    B = IntMatrix.parse_triplets(A.serialize_triplets())
    assert A == B


def test_matrix_ops():
    A = IntMatrix.from_rows([[1, 2], [3, 4]])
    B = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert (A * B) == IntMatrix.from_rows([[2, 1], [4, 3]])
    assert A.transpose() == IntMatrix.from_rows([[1, 3], [2, 4]])
    assert (A + (-A)).is_zero()
    assert A.det() == -2
    with pytest.raises(ValueError):
        IntMatrix(2, 2, {(2, 0): 1})
