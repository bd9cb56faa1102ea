import numpy as np
import pytest

from gendescent.descent import (admissible_sets, all_reflections, descent_equiv_classes, descent_matrix,
                                descent_set, factorizations, is_left_connected, is_nice, n_a_set, neighbours, psi,
                                reflection_set, simple_reflections, theorem_family)


def test_descent_set_basics(grp):
    g = grp("B3")
    T = all_reflections(g)
    assert descent_set(g, T, 0) == frozenset()
    assert descent_set(g, T, g.w0) == T.members
    for w in range(g.order):
        assert len(descent_set(g, T, w)) == len(n_a_set(g, T, w))


def test_descent_matrix_matches_length_definition(grp, monkeypatch):
    import gendescent.descent as d
    monkeypatch.setattr(d, "CROSS_CHECK", True)
    g = grp("H3")
    A = theorem_family(g, [0], [2])
    members, M = descent_matrix(g, A)
    assert M.shape == (g.order, len(members))


def test_dihedral_admissible(grp):
    g = grp("I2_8")
    T = admissible_sets(g, reflection_set(g, "s,t,sts"))
    assert [T.label(i) for i in range(len(T))] == ["{}", "{s}", "{t}", "{s,sts}", "{t,sts}", "{s,t,sts}"]
    assert [g.word_label(z) for z in T.reps] == ["1", "s", "t", "ts", "tststst", "stststst"]


@pytest.mark.parametrize("m", range(2, 8))
def test_b_admissible_count(grp, m):
    g = grp(f"I2_{2 * m}")
    assert len(admissible_sets(g, theorem_family(g, ["s"], ["t"]))) == 2 * m + 2


def test_extremes(grp):
    g = grp("B2")
    assert len(admissible_sets(g, all_reflections(g))) == g.order
    empty = admissible_sets(g, [])
    assert len(empty) == 1 and len(empty.classes[0]) == g.order
    assert descent_equiv_classes(g, []) == [list(range(g.order))]
    assert all(len(c) == 1 for c in descent_equiv_classes(g, all_reflections(g)))


def test_equivalence_classes_are_fibres(grp):
    g = grp("B3")
    for A in (simple_reflections(g), theorem_family(g, [0], [2]), reflection_set(g, [0, 4, 5])):
        T = admissible_sets(g, A)
        assert sorted(descent_equiv_classes(g, A)) == sorted(c.tolist() for c in T.classes)


def test_left_connected(grp):
    g = grp("B2")
    assert is_left_connected(g, [3])
    assert not is_left_connected(g, [0, g.w0])
    assert is_left_connected(g, [0, 1])


def test_nice_examples(grp):
    g = grp("B2")
    res = is_nice(g, reflection_set(g, "s,sts"))
    assert not res and res.witness == (g.reflection_index("sts"), g.parse_word("s"))
    for A in ([], [0], [1], [0, 1]):
        assert is_nice(g, A)
    g8 = grp("I2_8")
    assert is_nice(g8, "s,t,sts") and is_nice(g8, "t,sts")


def test_theorem_family(grp):
    g = grp("B2")
    assert sorted(theorem_family(g, ["t"], ["s"]).labels()) == ["s", "t", "tst"]
    assert theorem_family(g, ["s", "t"], []).members == simple_reflections(g).members
    f4 = grp("F4")
    assert len(theorem_family(f4, ["s1", "s2", "s3", "s4"], ["s1"])) == 14


def test_psi_involution_and_trivial_case(grp):
    g = grp("G2")
    A = reflection_set(g, "s,sts")
    rng = np.random.default_rng(0)
    for _ in range(100):
        k = int(rng.integers(2))
        u, v = (int(x) for x in rng.integers(g.order, size=2))
        assert psi(g, A, k, psi(g, A, k, (u, v))) == (u, v)
    # 1^-1 t 1 = t is not in A, so 1 and t are neighbours
    assert psi(g, A, 1, (0, 5)) == (g.gens[1], 5)


def test_psi_moves_factorizations(grp):
    g = grp("G2")
    A = theorem_family(g, ["s"], ["t"])
    T = admissible_sets(g, A)
    for w in range(g.order):
        for k in range(2):
            sw = g.product(g.gens[k], w)
            if not neighbours(g, A, w, sw):
                continue
            for I in range(len(T)):
                for J in range(len(T)):
                    src = factorizations(g, T, I, J, w)
                    assert {psi(g, A, k, p) for p in src} == factorizations(g, T, I, J, sw)
