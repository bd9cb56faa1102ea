import json
from pathlib import Path

import pytest

from gendescent.search import SearchBudgetError, search_nice, summarize

DATA = Path(__file__).parent / "data"


@pytest.mark.parametrize("name,nice,theorem", [("A2", 5, 5), ("B2", 11, 9), ("G2", 15, 9), ("A3", 9, 9)])
def test_small_groups(grp, name, nice, theorem):
    s = summarize(search_nice(grp(name)))
    assert (s["nice"], s["theorem_form"]) == (nice, theorem)
    assert s["closed"] == s["nice"]
    assert s["theorem_form_not_nice"] == 0 and s["converse_candidates"] == 0


def test_g2_extra_nice_sets(grp):
    rows = search_nice(grp("G2"), contains_S=True)
    extra = sorted(sorted(r.A) for r in rows if r.question_candidate)
    assert extra == [["s", "sts", "t"], ["s", "t", "tst"]]


def test_b3_regression(grp):
    frozen = json.loads((DATA / "b3_search.json").read_text())
    rows = search_nice(grp("B3"), jobs=2)
    assert summarize(rows) == frozen["summary"]
    assert [r.mask for r in rows if r.nice] == frozen["nice_masks"]
    assert [r.mask for r in rows if r.closed] == frozen["closed_masks"]


def test_parallel_matches_serial(grp):
    g = grp("G2")
    assert [r.to_json() for r in search_nice(g, jobs=1)] == [r.to_json() for r in search_nice(g, jobs=2)]


def test_budget(grp):
    with pytest.raises(SearchBudgetError, match="contains-S"):
        search_nice(grp("F4"))
    with pytest.raises(SearchBudgetError):
        search_nice(grp("F4"), contains_S=True)
    rows = search_nice(grp("A3"), contains_S=True)
    assert len(rows) == 8 and all(r.contains_S for r in rows)
