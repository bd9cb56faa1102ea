import json
import math

import numpy as np
import pytest

from gendescent.coxeter import (CoxeterGroup, CoxeterMatrix, GroupTooLargeError, build_group, cache_key,
                                load_or_build, named_type)


@pytest.mark.parametrize("name,order,nrefl", [
    ("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("A4", 120, 10), ("B2", 8, 4), ("B3", 48, 9),
    ("D4", 192, 12), ("G2", 12, 6), ("H3", 120, 15), ("F4", 1152, 24), ("I2_5", 10, 5), ("I2_8", 16, 8),
    ("B2xA1", 16, 5), ("A1xA1", 4, 2),
])
def test_orders(grp, name, order, nrefl):
    g = grp(name)
    assert (g.order, g.nrefl, g.npos) == (order, nrefl, nrefl)


def test_b_family_orders():
    for n in (2, 3, 4):
        assert build_group(named_type(f"B{n}")).order == 2 ** n * math.factorial(n)


def test_reflection_classes(grp):
    b2 = grp("B2")
    labels = sorted(sorted(b2.refl_label(r) for r in c) for c in b2.refl_classes)
    assert labels == [["s", "tst"], ["sts", "t"]]
    f4 = grp("F4")
    assert sorted(len(c) for c in f4.refl_classes) == [12, 12]
    assert len(grp("G2").refl_classes) == 2
    assert len(grp("A3").refl_classes) == 1


def test_field_conductor(grp):
    assert grp("H3").field.N == 30
    assert grp("G2").field.N == 6
    assert grp("A1xA1").field.N == 2


def test_words_and_products(grp):
    g = grp("B2")
    st_ = g.parse_word("st")
    assert g.length(st_) == 2
    assert g.product(st_, 0) == st_
    assert g.product(st_, int(g.inverse[st_])) == 0
    assert g.word_label(g.w0) == "stst"
    assert g.parse_word("tsts") == g.w0
    f4 = grp("F4")
    w = f4.parse_word("s1.s2.s3")
    assert f4.parse_word("s1s2s3") == w
    assert f4.word_label(w) == "s1.s2.s3"


def test_shortlex_order(grp):
    g = grp("A3")
    keys = [(len(w), list(w)) for w in g.words]
    assert keys == sorted(keys)
    assert g.words[0] == () and [g.words[k] for k in range(1, 4)] == [(0,), (1,), (2,)]


def test_n_set(grp):
    g = grp("G2")
    assert g.n_set(0) == frozenset()
    assert g.n_set(g.w0) == frozenset(range(g.npos))
    assert all(len(g.n_set(w)) == g.length(w) for w in range(g.order))


def test_reflection_index_forms(grp):
    g = grp("B2")
    r = g.reflection_index("sts")
    assert g.reflection_index(r) == r == g.reflection_index(str(r))
    with pytest.raises(ValueError):
        g.reflection_index("st")
    with pytest.raises(ValueError):
        g.reflection_index(99)


def test_reflection_subgroup(grp):
    g = grp("I2_8")
    sbar = g.reflection_subgroup([g.reflection_index("t"), g.reflection_index("sts")])
    assert sorted(g.word_label(x) for x in sbar.coset_reps) == ["1", "s"]
    assert len(sbar.coset_reps) * sbar.order == g.order
    triv = g.reflection_subgroup([])
    assert triv.order == 1 and len(triv.coset_reps) == g.order
    full = g.reflection_subgroup([0, 1])
    assert list(full.coset_reps) == [0]


def test_coset_reps_are_minimal(grp):
    g = grp("B3")
    for I in ([0], [1, 2], [0, g.reflection_index("s2.s3.s2")]):
        data = g.reflection_subgroup(I)
        for x in data.coset_reps:
            assert all(g.length(g.product(int(x), int(u))) >= g.length(int(x)) for u in data.elements)


def test_direct_product_split(grp):
    assert len(grp("A1xA1").direct_product_split()) == 2
    assert len(grp("B2").direct_product_split()) == 1
    assert sorted(map(len, grp("B2xA1").direct_product_split())) == [1, 2]


def test_invalid_matrices():
    with pytest.raises(ValueError):
        CoxeterMatrix.from_rows([[1, 3], [2, 1]])  # not symmetric
    with pytest.raises(ValueError):
        CoxeterMatrix.from_rows([[1, 1], [1, 1]])  # m = 1 off the diagonal
    with pytest.raises(ValueError):
        build_group(named_type("I2_inf"))
    with pytest.raises(ValueError):
        named_type("Q7")


def test_infinite_group_detected():
    # affine A2 (triangle of 3s) is infinite
    m = CoxeterMatrix.from_rows([[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    with pytest.raises(GroupTooLargeError, match="appears infinite"):
        build_group(m, max_roots=200)


def test_json_roundtrip(grp):
    g = grp("H3")
    data = json.loads(json.dumps(g.to_json()))
    h = CoxeterGroup.from_json(data)
    assert h.order == g.order and np.array_equal(h.perms, g.perms) and h.w0 == g.w0
    assert [sorted(c) for c in h.refl_classes] == [sorted(c) for c in g.refl_classes]


def test_cache(tmp_path):
    m = named_type("B3")
    g = load_or_build(m, tmp_path)
    path = tmp_path / f"group-{cache_key(m)}.json"
    assert path.exists()
    h = load_or_build(m, tmp_path)
    assert np.array_equal(g.perms, h.perms)
    # corrupt the cache: it is rebuilt silently
    data = json.loads(path.read_text())
    data["perms"][3][0] = data["perms"][3][1]
    path.write_text(json.dumps(data))
    k = load_or_build(m, tmp_path)
    assert np.array_equal(k.perms, g.perms)
    path.write_text("not json")
    assert load_or_build(m, tmp_path).order == 48


def test_cache_key_depends_on_matrix():
    assert cache_key(named_type("B3")) != cache_key(named_type("A3"))
    assert cache_key(named_type("B3")) == cache_key(named_type("B3"))


def test_validate_catches_tampering(grp):
    from gendescent.coxeter import IntegrityError
    data = grp("A2").to_json()
    data["words"][2] = [0]
    with pytest.raises(IntegrityError):
        CoxeterGroup.from_json(data)
