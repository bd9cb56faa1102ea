"""Exhaustive classification of reflection subsets A: niceness versus closure of D_A(W)."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from .algebra import descent_algebra
from .coxeter import CoxeterGroup, CoxeterMatrix, build_group
from .descent import ReflectionSet, admissible_sets, is_nice, theorem_family

DEFAULT_MAX_REFLECTIONS = 15


class SearchBudgetError(ValueError):
    pass


@dataclass
class SearchRow:
    mask: int
    A: list  # reflection labels
    nice: bool
    closed: bool
    contains_S: bool
    theorem_form: bool
    rank: int

    @property
    def converse_candidate(self) -> bool:
        """Closed but not nice."""
        return self.closed and not self.nice

    @property
    def question_candidate(self) -> bool:
        """Nice and containing S, but not of the form S1 u C(S2)."""
        return self.nice and self.contains_S and not self.theorem_form

    def to_json(self) -> dict:
        out = asdict(self)
        out["converse_candidate"] = self.converse_candidate
        out["question_candidate"] = self.question_candidate
        return out


def theorem_form_sets(g: CoxeterGroup) -> set:
    n = g.rank
    out = set()
    for m1 in range(1 << n):
        for m2 in range(1 << n):
            out.add(theorem_family(g, [k for k in range(n) if m1 >> k & 1],
                                   [k for k in range(n) if m2 >> k & 1]).members)
    return out


def classify(g: CoxeterGroup, members: frozenset, theorem_sets: set, mask: int = 0) -> SearchRow:
    A = ReflectionSet(g, members)
    table = admissible_sets(g, A)
    nice = bool(is_nice(g, A, table))
    D = descent_algebra(g, A, table, oracle=False)
    return SearchRow(mask, A.labels(), nice, D.closed, A.contains_S, members in theorem_sets, len(table))


# worker state: one group per process, built once
_WORKER: dict = {}


def _init_worker(matrix_json: dict):
    g = build_group(CoxeterMatrix.from_json(matrix_json))
    _WORKER["g"] = g
    _WORKER["theorem"] = theorem_form_sets(g)


def _work(masks: list) -> list:
    g = _WORKER["g"]
    return [classify(g, _members(mask, g.nrefl), _WORKER["theorem"], mask) for mask in masks]


def _members(mask: int, n: int) -> frozenset:
    return frozenset(r for r in range(n) if mask >> r & 1)


def search_nice(g: CoxeterGroup, contains_S: bool = False, jobs: int = 1,
                max_reflections: int = DEFAULT_MAX_REFLECTIONS) -> list[SearchRow]:
    """Classify every A subset of T (or every A containing S); rows in increasing bitmask order."""
    n = g.nrefl
    free = n - g.rank if contains_S else n
    if free > max_reflections:
        hint = "" if contains_S else "; try --filter contains-S"
        raise SearchBudgetError(f"2^{free} subsets of |T| = {n} reflections exceed the search budget 2^{max_reflections}{hint}")
    s_mask = sum(1 << k for k in range(g.rank))
    masks = [mask for mask in range(1 << n) if not contains_S or mask & s_mask == s_mask]
    if jobs <= 1 or len(masks) < 64:
        theorem = theorem_form_sets(g)
        return [classify(g, _members(mask, n), theorem, mask) for mask in masks]
    chunk = max(1, len(masks) // (jobs * 4))
    batches = [masks[i:i + chunk] for i in range(0, len(masks), chunk)]
    rows: list[SearchRow] = []
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                             initargs=(g.matrix.to_json(),)) as pool:
        for part in pool.map(_work, batches):
            rows.extend(part)
    return rows


def summarize(rows: list[SearchRow]) -> dict:
    return {
        "subsets": len(rows),
        "nice": sum(r.nice for r in rows),
        "closed": sum(r.closed for r in rows),
        "theorem_form": sum(r.theorem_form for r in rows),
        "theorem_form_not_nice": sum(r.theorem_form and not r.nice for r in rows),
        "nice_not_closed": sum(r.nice and not r.closed for r in rows),
        "converse_candidates": sum(r.converse_candidate for r in rows),
        "question_candidates": sum(r.question_candidate for r in rows),
    }
