"""A-descent sets, descent classes, the A-descent equivalence and nice subsets."""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .coxeter import CoxeterGroup

# cross-check the root formula against the length formula for D_A(w)
CROSS_CHECK = bool(os.environ.get("GENDESCENT_DEBUG"))


@dataclass(frozen=True)
class ReflectionSet:
    group: CoxeterGroup
    members: frozenset

    def __post_init__(self):
        bad = [r for r in self.members if not 0 <= r < self.group.nrefl]
        if bad:
            raise ValueError(f"not reflection indices: {bad}")

    @property
    def contains_S(self) -> bool:
        return all(k in self.members for k in range(self.group.rank))

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def labels(self) -> list[str]:
        return [self.group.refl_label(r) for r in self.sorted()]

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.members)

    def __contains__(self, r) -> bool:
        return r in self.members

    def __hash__(self):
        return hash(self.members)

    def __eq__(self, other):
        if isinstance(other, ReflectionSet):
            return self.members == other.members
        return self.members == frozenset(other)


def reflection_set(g: CoxeterGroup, A) -> ReflectionSet:
    if isinstance(A, ReflectionSet):
        return A
    if isinstance(A, str):
        A = [a for a in A.split(",") if a.strip()]
    return ReflectionSet(g, frozenset(g.reflection_index(a) for a in A))


def all_reflections(g: CoxeterGroup) -> ReflectionSet:
    return ReflectionSet(g, frozenset(range(g.nrefl)))


def simple_reflections(g: CoxeterGroup) -> ReflectionSet:
    return ReflectionSet(g, frozenset(range(g.rank)))


def theorem_family(g: CoxeterGroup, S1: Iterable, S2: Iterable) -> ReflectionSet:
    """S1 together with the conjugacy classes of the generators in S2."""
    members = set(_gen_indices(g, S1))
    for k in _gen_indices(g, S2):
        cls = next(c for c in g.refl_classes if k in c)
        members.update(cls)
    return ReflectionSet(g, frozenset(members))


def _gen_indices(g: CoxeterGroup, gens: Iterable) -> list[int]:
    out = []
    for s in gens:
        out.append(g.labels.index(s) if isinstance(s, str) else int(s))
    return out


# ------------------------------------------------------------------ descents


def descent_matrix(g: CoxeterGroup, A) -> tuple[list[int], np.ndarray]:
    """(sorted members of A, bool array [w, a] = A[a] in D_A(w))."""
    A = sorted(reflection_set(g, A).members)
    M = g.perms[:, A] >= g.npos if A else np.zeros((g.order, 0), dtype=bool)
    if CROSS_CHECK and A:
        tab = g.table
        relts = [g.reflections[r] for r in A]
        by_length = g.lengths[tab[:, relts]] < g.lengths[:, None]
        assert np.array_equal(by_length, M), "length and root descent formulas disagree"
    return A, M


def descent_set(g: CoxeterGroup, A, w: int) -> frozenset:
    """D_A(w) = {r in A : l(wr) < l(w)}."""
    A = reflection_set(g, A)
    out = frozenset(r for r in A.members if g.length(g.product(w, g.reflections[r])) < g.length(w))
    if CROSS_CHECK:
        assert out == frozenset(r for r in A.members if g.perms[w, r] >= g.npos)
    return out


def n_a_set(g: CoxeterGroup, A, w: int) -> frozenset:
    A = reflection_set(g, A)
    return frozenset(r for r in A.members if g.perms[w, r] >= g.npos)


@dataclass
class DescentTable:
    group: CoxeterGroup
    A: ReflectionSet
    admissible: list  # frozensets, ordered by their ShortLex-least member
    classes: list  # element index arrays, parallel to admissible
    reps: list  # z_I, parallel to admissible
    class_of: np.ndarray  # element -> position in admissible

    def __len__(self):
        return len(self.admissible)

    def descent_of(self, w: int) -> frozenset:
        return self.admissible[self.class_of[w]]

    def index(self, I) -> int:
        return self.admissible.index(frozenset(I))

    def label(self, i: int) -> str:
        I = self.admissible[i]
        if not I:
            return "{}"
        return "{" + ",".join(self.group.refl_label(r) for r in sorted(I)) + "}"

    @cached_property
    def rep_of_element(self) -> np.ndarray:
        return np.array(self.reps, dtype=np.int64)[self.class_of]


def admissible_sets(g: CoxeterGroup, A) -> DescentTable:
    A = reflection_set(g, A)
    members, M = descent_matrix(g, A)
    # encode each row as bytes to group elements by descent set
    keys = np.packbits(M, axis=1) if M.shape[1] else np.zeros((g.order, 1), dtype=np.uint8)
    seen: dict = {}
    class_of = np.empty(g.order, dtype=np.int64)
    admissible, buckets = [], []
    for w in range(g.order):
        key = keys[w].tobytes()
        idx = seen.get(key)
        if idx is None:
            idx = seen[key] = len(admissible)
            admissible.append(frozenset(members[a] for a in np.flatnonzero(M[w])))
            buckets.append([])
        class_of[w] = idx
        buckets[idx].append(w)
    classes = [np.array(b, dtype=np.int64) for b in buckets]
    reps = [int(c[0]) for c in classes]
    return DescentTable(g, A, admissible, classes, reps, class_of)


# ------------------------------------------------------------------ equivalence


def _in_A_mask(g: CoxeterGroup, A: ReflectionSet) -> np.ndarray:
    mask = np.zeros(g.nrefl, dtype=bool)
    mask[list(A.members)] = True
    return mask


def descent_equiv_classes(g: CoxeterGroup, A) -> list[list[int]]:
    """Classes of the reflexive-transitive closure of w ~ sw for w^{-1}sw not in A."""
    A = reflection_set(g, A)
    inA = _in_A_mask(g, A)
    parent = list(range(g.order))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tab = g.table
    for k, s in enumerate(g.gens):
        conj = g.left_gen_conj[k]
        for w in np.flatnonzero(~inA[conj]).tolist():
            a, b = find(w), find(int(tab[s, w]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for w in range(g.order):
        groups.setdefault(find(w), []).append(w)
    return sorted(groups.values(), key=lambda c: c[0])


def is_left_connected(g: CoxeterGroup, E: Iterable[int]) -> bool:
    E = set(int(e) for e in E)
    if len(E) <= 1:
        return True
    start = next(iter(E))
    seen, stack = {start}, [start]
    tab = g.table
    while stack:
        w = stack.pop()
        for s in g.gens:
            x = int(tab[s, w])
            if x in E and x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == len(E)


# ------------------------------------------------------------------ niceness


@dataclass(frozen=True)
class NiceResult:
    nice: bool
    witness: Optional[tuple[int, int]] = None  # (reflection index r, element w)

    def __bool__(self):
        return self.nice


def is_nice(g: CoxeterGroup, A, table: Optional[DescentTable] = None) -> NiceResult:
    """Exhaustive check: for r in A, w in W with w^{-1} r w not in A, D_A(rw) = D_A(w)."""
    A = reflection_set(g, A)
    if table is None:
        table = admissible_sets(g, A)
    inA = _in_A_mask(g, A)
    refl_idx = np.full(g.order, -1, dtype=np.int64)
    refl_idx[g.reflections] = np.arange(g.nrefl)
    tab = g.table
    ar = np.arange(g.order)
    cls = table.class_of
    for r in A.sorted():
        re = g.reflections[r]
        conj = refl_idx[tab[tab[g.inverse, re], ar]]  # w^{-1} r w
        outside = ~inA[conj]
        bad = np.flatnonzero(outside & (cls[tab[re, :]] != cls))
        if len(bad):
            return NiceResult(False, (r, int(bad[0])))
    return NiceResult(True)


def neighbours(g: CoxeterGroup, A, w: int, w2: int) -> bool:
    """w is an A-descent neighbour of w2: w2 w^{-1} in S and w^{-1} w2 not in A."""
    A = reflection_set(g, A)
    x = g.product(w2, int(g.inverse[w]))
    if x not in g.gens:
        return False
    y = g.product(int(g.inverse[w]), w2)
    return g.refl_of_element.get(y) not in A.members


def psi(g: CoxeterGroup, A, s: int, pair: tuple[int, int]) -> tuple[int, int]:
    """The involution of W x W attached to a generator s (given by generator index)."""
    A = reflection_set(g, A)
    se = g.gens[s]
    u, v = pair
    su = g.product(se, u)
    if neighbours(g, A, u, su):
        return su, v
    return u, g.product(g.conj(u, se), v)


def factorizations(g: CoxeterGroup, table: DescentTable, I: int, J: int, w: int) -> set[tuple[int, int]]:
    """D_A(I,J,w) = {(u,v) in D_I x D_J : uv = w}, with I, J positions in the table."""
    out = set()
    for u in table.classes[I].tolist():
        v = g.product(int(g.inverse[u]), w)
        if table.class_of[v] == J:
            out.add((u, v))
    return out
