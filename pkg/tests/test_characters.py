from fractions import Fraction

import pytest

from gendescent.characters import (ClassFunction, induced_trivial, regular_character, sign_character, theta_map)
from gendescent.descent import simple_reflections, theorem_family


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3"])
def test_basic_characters(grp, name):
    g = grp(name)
    one = ClassFunction.constant(g, 1)
    assert one.inner(one) == 1
    sgn = sign_character(g)
    assert sgn.inner(sgn) == 1 and sgn.inner(one) == 0
    reg = regular_character(g)
    assert reg.inner(one) == 1 and reg(0) == g.order
    assert induced_trivial(g, []) == reg
    assert induced_trivial(g, list(range(g.nrefl))) == one


def test_induced_degree_and_frobenius(grp):
    g = grp("B3")
    for I in ([0], [0, 1], [1, 2]):
        ind = induced_trivial(g, I)
        sub = g.reflection_subgroup(I)
        assert ind(0) == len(sub.coset_reps)
        # Frobenius reciprocity with the trivial character
        assert ind.inner(ClassFunction.constant(g, 1)) == 1


def test_theta_solomon_is_morphism(grp):
    for name in ("A3", "B3"):
        g = grp(name)
        th = theta_map(g, simple_reflections(g))
        assert th.is_morphism


def test_theta_kernel_dihedral_a(grp):
    g = grp("I2_8")
    th = theta_map(g, "s,t,sts")
    assert th.status == "morphism"
    assert len(th.kernel) == 1


def test_theta_g2_b_not_morphism(grp):
    g = grp("G2")
    th = theta_map(g, theorem_family(g, ["s"], ["t"]))
    assert th.status == "not_morphism"
    a, b, w, lhs, rhs = th.witness
    assert lhs != rhs


def test_class_function_arith(grp):
    g = grp("A2")
    one = ClassFunction.constant(g, 1)
    assert (one - one).is_zero()
    assert (one * Fraction(3)).inner(one) == 3
    assert (-one + one).is_zero()
