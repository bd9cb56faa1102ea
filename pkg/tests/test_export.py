import json

import pytest

from gendescent.algebra import descent_algebra
from gendescent.descent import theorem_family
from gendescent.export import export_csv, export_json, load_json, read_csv, revalidate


@pytest.fixture
def g2_export(grp):
    g = grp("G2")
    A = theorem_family(g, ["s"], ["t"])
    return g, A, export_json(g, A, descent_algebra(g, A))


def test_roundtrip(g2_export):
    g, A, doc = g2_export
    text = json.dumps(doc)
    assert revalidate(text) == (True, "ok")
    assert revalidate(doc, g) == (True, "ok")


def test_tampered_constant_detected(g2_export):
    g, A, doc = g2_export
    doc = json.loads(json.dumps(doc))
    doc["constants"][0][3] += 1
    ok, msg = revalidate(doc, g)
    assert not ok and "constants" in msg
    doc2 = json.loads(json.dumps(g2_export[2]))
    doc2["closed"] = False
    assert revalidate(doc2, g)[0] is False


def test_bad_documents():
    with pytest.raises(ValueError):
        load_json({"format": "other"})
    with pytest.raises(ValueError):
        load_json({"format": "gendescent.structure-constants", "version": 99})


def test_non_closed_export(grp):
    g = grp("B2")
    doc = export_json(g, "s,sts", descent_algebra(g, "s,sts"))
    assert doc["closed"] is False and doc["constants"] == [] and "witness" in doc
    assert revalidate(doc, g)[0]


def test_csv(grp):
    g = grp("A2")
    pres = descent_algebra(g, "s,t")
    text = export_csv(pres)
    assert text.startswith("I,J,K,c\r\n")
    rows = read_csv(text)
    assert sum(c for *_, c in rows) > 0
    # labels containing commas are quoted and survive the round trip
    assert all(r[0] in pres.labels for r in rows)
    with pytest.raises(ValueError):
        read_csv("a,b\n")
