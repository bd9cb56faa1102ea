import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import hermite_normal_form

from gendescent.lattice import Lattice, integer_kernel, nullspace_q, rank_q, solve_q, xgcd

matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=1, max_size=6))


big_matrices = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=n, max_size=n), min_size=1, max_size=9))


@settings(max_examples=150, deadline=None)
@given(st.one_of(matrices, big_matrices))
def test_lattice_matches_sympy(rows):
    lat = Lattice(len(rows[0]), [np.array(r) for r in rows])
    M = sympy.Matrix(rows)
    assert lat.rank == M.rank()
    for r in rows:
        assert np.array(r) in lat
    if M.rank() > 0:
        # column-style HNF of the transpose spans the same lattice
        H = hermite_normal_form(M.T)
        for j in range(H.shape[1]):
            assert np.array([int(x) for x in H[:, j]]) in lat
        other = Lattice(len(rows[0]), [np.array([int(x) for x in H[:, j]]) for j in range(H.shape[1])])
        for v in lat.basis():
            assert v in other


def test_index_of_full_rank_lattice():
    rows = [[2, 1, 0], [0, 3, 1], [1, 0, 5]]
    lat = Lattice(3, [np.array(r) for r in rows])
    assert lat.index_in() == abs(sympy.Matrix(rows).det())
    assert Lattice(3, [np.array([1, 0, 0])]).index_in() is None


def test_hnf_is_reduced_echelon():
    lat = Lattice(3, [np.array(r) for r in ([4, 6, 2], [2, 8, 0], [0, 0, 6])])
    H = lat.hnf()
    for i, p in enumerate(lat.pivots):
        assert H[i, p] > 0
        for j in range(i):
            assert 0 <= H[j, p] < H[i, p]


def test_membership_and_coordinates():
    lat = Lattice(2, [np.array([2, 0]), np.array([0, 3])])
    assert np.array([4, 9]) in lat
    assert np.array([1, 0]) not in lat
    coords = lat.coordinates(np.array([4, 9]))
    assert sum(c * r for c, r in zip(coords, lat.basis())).tolist() == [4, 9]
    assert lat.coordinates(np.array([1, 0])) is None


def test_large_entries_switch_to_python_ints():
    big = 1 << 50
    lat = Lattice(2, [np.array([big, 1], dtype=object), np.array([3, big + 1], dtype=object)])
    assert lat.rank == 2
    assert np.array([big + 3, big + 2], dtype=object) in lat


def test_rejects_fractional_vectors():
    with pytest.raises(TypeError):
        Lattice(2, [np.array([0.5, 1.0])])


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_integer_kernel(rows):
    K = integer_kernel(rows)
    M = sympy.Matrix(rows)
    assert len(K) == M.rows - M.rank()
    for k in K:
        assert all(v == 0 for v in sympy.Matrix([k]) * M)


def test_rational_helpers():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank_q(rows) == 2
    ns = nullspace_q(rows)
    assert len(ns) == 1 and all(sum(a * b for a, b in zip(r, ns[0])) == 0 for r in rows)
    x = solve_q([[1, 0], [0, 2]], [3, 4])
    assert x == [3, 2]
    assert solve_q([[1, 1]], [1, 2]) is None


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert g == sympy.gcd(a, b) and x * a + y * b == g
