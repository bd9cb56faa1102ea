from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gendescent.algebra import (GroupAlgebraVector, algebra_multiply, convolve, convolve_dense, counting_constants,
                                descent_algebra, radical, sigma1_module, sigma_in_descent, sigma_module,
                                tensor_check)
from gendescent.descent import admissible_sets, all_reflections, simple_reflections, theorem_family


def brute_convolve(g, a, b):
    out = np.zeros(g.order, dtype=np.int64)
    for u in range(g.order):
        for v in range(g.order):
            out[g.product(u, v)] += a[u] * b[v]
    return out


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=12, max_size=12), st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_convolve_matches_brute_force(a, b):
    from gendescent.verify import group
    g = group("G2")
    a, b = np.array(a), np.array(b)
    assert np.array_equal(convolve_dense(g, a, b), brute_convolve(g, a, b))
    sa, sb = GroupAlgebraVector.from_dense(a), GroupAlgebraVector.from_dense(b)
    assert convolve(g, sa, sb) == GroupAlgebraVector.from_dense(brute_convolve(g, a, b))


def test_convolve_object_dtype(grp):
    g = grp("A2")
    a = np.array([Fraction(1, 2)] + [0] * 5, dtype=object)
    b = np.array([0, Fraction(1, 3), 0, 0, 0, 0], dtype=object)
    assert convolve_dense(g, a, b)[1] == Fraction(1, 6)


def test_group_algebra_vector_ops():
    v = GroupAlgebraVector.from_elements([0, 2])
    w = GroupAlgebraVector.basis_element(2)
    assert (v - w) == GroupAlgebraVector.basis_element(0)
    assert (v * 3)[2] == 3 and (-v)[0] == -1
    assert not (v - v)
    assert v.support() == [0, 2] and v.is_integral()


def test_full_and_solomon(grp):
    g = grp("B2")
    D = descent_algebra(g, all_reflections(g))
    assert D.closed and D.rank == 8 and D.has_unit and D.info["oracle_agrees"]
    for name in ("A3", "B3", "H3"):
        h = grp(name)
        S = descent_algebra(h, simple_reflections(h))
        assert S.closed and S.rank == 2 ** h.rank and S.has_unit


def test_not_closed_witness(grp):
    g = grp("B2")
    D = descent_algebra(g, "s,sts")
    assert not D.closed and D.structure_constants is None
    I, J, w, r = D.witness
    assert w != r


def test_empty_set(grp):
    g = grp("A3")
    D = descent_algebra(g, [])
    assert D.closed and D.rank == 1 and not D.has_unit
    assert D.structure_constants[0, 0, 0] == g.order


def test_counting_agrees_with_convolution(grp):
    g = grp("G2")
    A = theorem_family(g, ["s"], ["t"])
    D = descent_algebra(g, A, oracle=False)
    assert np.array_equal(counting_constants(g, admissible_sets(g, A)), D.structure_constants)


def test_rational_constants_and_coordinates(grp):
    g = grp("A2")
    D = descent_algebra(g, simple_reflections(g))
    c = D.rational_structure_constants()
    assert len(c) == 4
    assert D.coordinates(D.basis[2] * 5) == [0, 0, 5, 0]
    assert D.coordinates(GroupAlgebraVector.basis_element(1)) is None


def test_sigma_equals_descent_for_simple(grp):
    g = grp("B3")
    sig = sigma_module(g, simple_reflections(g))
    assert sig.rank == 2 ** 3 and sig.closed and sig.info["x_basis"] and sig.info["contained_in_D"]
    assert sig.has_unit


def test_sigma_dihedral_b(grp):
    g = grp("G2")
    B = theorem_family(g, ["s"], ["t"])
    sig = sigma_module(g, B)
    assert sig.rank == 8 and sig.closed
    assert sigma_in_descent(g, B, sig.info["subsets"])


def test_sigma1(grp):
    g = grp("I2_8")
    s1 = sigma1_module(g, "s,t,sts")
    # W_{s} and W_{sts} are conjugate, the dihedral W_{t,sts} and W_{s,...} are not
    assert s1.rank >= 1
    for v in s1.basis:
        # a difference x_I - x_J of conjugate parabolics has the same augmentation
        assert int(v.sum()) == 0


def test_radical_of_solomon_a2(grp):
    g = grp("A2")
    D = descent_algebra(g, simple_reflections(g))
    c = D.rational_structure_constants()
    rad = radical(c)
    # dimension of the radical of the Solomon algebra = 2^n - number of partitions of n+1 = 4 - 3
    assert len(rad) == 1
    for x in rad:
        assert not any(algebra_multiply(c, x, x))


def test_radical_semisimple():
    # Q x Q
    c = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    assert radical(c, unit=[1, 1]) == []
    with pytest.raises(ValueError):
        radical(c, unit=[1, 0])


def test_tensor(grp):
    g = grp("B2xA1")
    for A in (all_reflections(g), simple_reflections(g), theorem_family(g, [0, 2], [1])):
        rep = tensor_check(g, A)
        assert rep, rep.details
    with pytest.raises(ValueError):
        tensor_check(grp("B2"), [0])
