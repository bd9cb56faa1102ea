"""Finite Coxeter groups from a Coxeter matrix.

The positive roots are produced by closing the simple roots under the simple
reflections (for a positive root alpha != alpha_s, s(alpha) is positive), so
only exact equality tests on field elements are ever needed.  Group elements
are stored as permutations of all roots, enumerated breadth-first by right
multiplication with the generators; the resulting order is ShortLex and the
stored word of each element is its ShortLex normal form.
"""
from __future__ import annotations

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from .field import INFINITY, FieldElement, FieldSpec, cos_value, make_field

CACHE_VERSION = 1
DEFAULT_MAX_ROOTS = 10_000


class GroupTooLargeError(RuntimeError):
    pass


class IntegrityError(AssertionError):
    pass


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class CoxeterMatrix:
    entries: tuple[tuple[Optional[int], ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        n = len(self.entries)
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("need one distinct label per generator")
        for i in range(n):
            if len(self.entries[i]) != n:
                raise ValueError("Coxeter matrix must be square")
            if self.entries[i][i] != 1:
                raise ValueError("diagonal entries must be 1")
            for j in range(n):
                if i == j:
                    continue
                m = self.entries[i][j]
                if m != self.entries[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if m is not INFINITY and m < 2:
                    raise ValueError("off-diagonal entries must be >= 2 or infinity")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels: Optional[Sequence[str]] = None) -> "CoxeterMatrix":
        entries = tuple(tuple(_parse_bond(m) for m in row) for row in rows)
        if labels is None:
            labels = default_labels(len(entries))
        return cls(entries, tuple(labels))

    @property
    def rank(self) -> int:
        return len(self.entries)

    def m(self, i: int, j: int) -> Optional[int]:
        return self.entries[i][j]

    def is_finite_bonded(self) -> bool:
        return all(m is not INFINITY for row in self.entries for m in row)

    def conductor(self) -> int:
        return reduce(lcm, (m for row in self.entries for m in row if m is not INFINITY and m > 1), 1)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "entries": [[("inf" if m is INFINITY else m) for m in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterMatrix":
        return cls.from_rows(data["entries"], data["labels"])

    def components(self) -> list[list[int]]:
        """Connected components of the Coxeter diagram (edges where m >= 3 or oo)."""
        n = self.rank
        seen = [False] * n
        comps = []
        for start in range(n):
            if seen[start]:
                continue
            comp, stack = [], [start]
            seen[start] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    m = self.entries[i][j]
                    if not seen[j] and i != j and (m is INFINITY or m >= 3):
                        seen[j] = True
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def restrict(self, indices: Sequence[int]) -> "CoxeterMatrix":
        return CoxeterMatrix(
            tuple(tuple(self.entries[i][j] for j in indices) for i in indices),
            tuple(self.labels[i] for i in indices),
        )


def _parse_bond(m):
    if m is INFINITY or m in ("inf", "oo", "infinity"):
        return INFINITY
    return int(m)


def default_labels(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("s",)
    if n == 2:
        return ("s", "t")
    return tuple(f"s{i + 1}" for i in range(n))


def _chain(n: int, bonds: dict) -> list[list[int]]:
    rows = [[2] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    for (i, j), m in bonds.items():
        rows[i][j] = rows[j][i] = m
    return rows


def _irreducible_rows(name: str) -> list[list]:
    name = name.strip()
    mt = re.fullmatch(r"I2_?\(?(\d+|inf)\)?", name)
    if mt:
        m = mt.group(1)
        return [[1, m], [m, 1]]
    mt = re.fullmatch(r"([A-HIa-hi])(\d+)", name)
    if not mt:
        raise ValueError(f"unknown Coxeter type {name!r}")
    kind, n = mt.group(1).upper(), int(mt.group(2))
    simple = {(i, i + 1): 3 for i in range(n - 1)}
    if kind == "A" and n >= 1:
        return _chain(n, simple)
    if kind == "B" and n >= 2:
        # Bourbaki: s1 - s2 - ... = s_n  (the short-root end carries the 4)
        simple[(n - 2, n - 1)] = 4
        return _chain(n, simple)
    if kind == "D" and n >= 4:
        bonds = {(i, i + 1): 3 for i in range(n - 2)}
        bonds[(n - 3, n - 1)] = 3
        return _chain(n, bonds)
    if kind == "E" and n in (6, 7, 8):
        bonds = {(0, 2): 3, (1, 3): 3, (2, 3): 3}
        bonds.update({(i, i + 1): 3 for i in range(3, n - 1)})
        return _chain(n, bonds)
    if kind == "F" and n == 4:
        return _chain(4, {(0, 1): 3, (1, 2): 4, (2, 3): 3})
    if kind == "G" and n == 2:
        return [[1, 6], [6, 1]]
    if kind == "H" and n in (3, 4):
        simple[(0, 1)] = 5
        return _chain(n, simple)
    raise ValueError(f"unknown Coxeter type {name!r}")


def named_type(name: str) -> CoxeterMatrix:
    """Coxeter matrix of a named type, e.g. 'F4', 'G2', 'I2_8', 'B2xA1'."""
    parts = [p for p in re.split(r"[x×*]", name.replace("I2_inf", "I2_inf")) if p]
    blocks = [_irreducible_rows(p) for p in parts]
    n = sum(len(b) for b in blocks)
    rows = [[2] * n for _ in range(n)]
    labels: list[str] = []
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                rows[off + i][off + j] = b[i][j]
        labels.extend(default_labels(k))
        off += k
    for i in range(n):
        rows[i][i] = 1
    if len(set(labels)) != n:
        letters = "stuvwxyz"
        labels = list(letters[:n]) if n <= len(letters) else [f"s{i + 1}" for i in range(n)]
    return CoxeterMatrix.from_rows(rows, labels)


# ---------------------------------------------------------------- group data


@dataclass(frozen=True)
class Root:
    coords: tuple[FieldElement, ...]
    positive: bool
    index: int


@dataclass
class ReflectionSubgroupData:
    generators: tuple[int, ...]  # reflection indices
    elements: np.ndarray  # element indices of W_I, sorted
    coset_reps: np.ndarray  # element indices of X_I, sorted

    @property
    def order(self) -> int:
        return len(self.elements)


class CoxeterGroup:
    """A fully enumerated finite Coxeter group.

    Roots ``0 .. P-1`` are the positive roots (simple roots first, in generator
    order); root ``i + P`` is the negative of root ``i``.  Element ``0`` is the
    identity and elements ``1 .. n`` are the generators.
    """

    def __init__(self, matrix: CoxeterMatrix, field: FieldSpec, roots: list[tuple[FieldElement, ...]],
                 perms: np.ndarray, words: list[tuple[int, ...]]):
        self.matrix = matrix
        self.field = field
        self.rank = matrix.rank
        self.npos = len(roots)
        self.roots = [Root(c, True, i) for i, c in enumerate(roots)] + [
            Root(tuple(-x for x in c), False, i + len(roots)) for i, c in enumerate(roots)
        ]
        self.perms = perms
        self.words = words
        self.order = len(words)
        P = self.npos
        self.lengths = (perms[:, :P] >= P).sum(axis=1).astype(np.int64)
        self._index = _CodeIndex(perms[:, :self.rank], 2 * P)
        self.gens = tuple(range(1, self.rank + 1))
        self.inverse = self._index.lookup(np.argsort(perms, axis=1)[:, :self.rank])
        self._init_reflections()

    # ---- construction helpers

    def _init_reflections(self):
        P = self.npos
        refl = [-1] * P
        missing = P
        for w in range(self.order):
            if missing == 0:
                break
            for k, s in enumerate(self.gens):
                a = int(self.perms[w, k])
                if a < P and refl[a] < 0:
                    refl[a] = self.product(self.product(w, s), int(self.inverse[w]))
                    missing -= 1
        if missing:
            raise IntegrityError("some positive root has no reflection")
        self.reflections = refl  # reflection index -> element index
        self.refl_of_element = {e: i for i, e in enumerate(refl)}
        if len(self.refl_of_element) != P:
            raise IntegrityError("reflections are not in bijection with positive roots")
        classes = []
        seen = set()
        for k in range(self.rank):
            r0 = k  # simple root k has reflection index k
            if r0 in seen:
                continue
            orbit, stack = {r0}, [r0]
            while stack:
                r = stack.pop()
                for s in self.gens:
                    c = self.refl_of_element[self.product(self.product(s, refl[r]), s)]
                    if c not in orbit:
                        orbit.add(c)
                        stack.append(c)
            seen |= orbit
            classes.append(sorted(orbit))
        self.refl_classes = classes
        self.w0 = int(np.argmax(self.lengths))

    # ---- basic queries

    @property
    def labels(self) -> tuple[str, ...]:
        return self.matrix.labels

    @property
    def identity(self) -> int:
        return 0

    @property
    def nrefl(self) -> int:
        return self.npos

    def element(self, word: Iterable) -> int:
        """Element index of a word given as generator indices or labels."""
        w = 0
        for g in word:
            k = self.labels.index(g) if isinstance(g, str) else int(g)
            w = self.product(w, self.gens[k])
        return w

    def parse_word(self, text: str) -> int:
        return self.element(self._split_word(text))

    def _split_word(self, text: str) -> list[int]:
        text = text.strip()
        if text in ("", "1", "e"):
            return []
        if "." in text or " " in text:
            parts = [p for p in re.split(r"[. ]+", text) if p]
            return [self.labels.index(p) for p in parts]
        labels = sorted(range(self.rank), key=lambda k: -len(self.labels[k]))
        out, pos = [], 0
        while pos < len(text):
            for k in labels:
                if text.startswith(self.labels[k], pos):
                    out.append(k)
                    pos += len(self.labels[k])
                    break
            else:
                raise ValueError(f"cannot parse word {text!r} over labels {self.labels}")
        return out

    def word_label(self, w: int) -> str:
        word = self.words[w]
        if not word:
            return "1"
        sep = "" if all(len(l) == 1 for l in self.labels) else "."
        return sep.join(self.labels[k] for k in word)

    def refl_label(self, r: int) -> str:
        return self.word_label(self.reflections[r])

    def reflection_index(self, spec) -> int:
        """Reflection index from a positive-root index, a word, or an element."""
        if isinstance(spec, (int, np.integer)):
            r = int(spec)
            if not 0 <= r < self.npos:
                raise ValueError(f"reflection index {r} out of range")
            return r
        text = str(spec).strip()
        if text.isdigit():
            return self.reflection_index(int(text))
        w = self.parse_word(text)
        if w not in self.refl_of_element:
            raise ValueError(f"{text!r} is not a reflection")
        return self.refl_of_element[w]

    def length(self, w: int) -> int:
        return int(self.lengths[w])

    def product(self, u: int, v: int) -> int:
        if self._table is not None:
            return int(self._table[u, v])
        img = self.perms[u][self.perms[v, :self.rank]]
        return int(self._index.lookup(img[None, :])[0])

    def elem_product(self, u: int, v: int) -> int:
        return self.product(u, v)

    _table: Optional[np.ndarray] = None

    @property
    def table(self) -> np.ndarray:
        """Full multiplication table, ``table[u, v] = index of uv``."""
        if self._table is None:
            simple_imgs = self.perms[:, :self.rank]
            tab = np.empty((self.order, self.order), dtype=np.int32)
            for u in range(self.order):
                tab[u] = self._index.lookup(self.perms[u][simple_imgs])
            self._table = tab
        return self._table

    def conj(self, x: int, w: int) -> int:
        """x^{-1} w x."""
        return self.product(self.product(int(self.inverse[x]), w), x)

    def n_set(self, w: int) -> frozenset[int]:
        P = self.npos
        return frozenset(np.nonzero(self.perms[w, :P] >= P)[0].tolist())

    def act(self, w: int, root: int) -> int:
        return int(self.perms[w, root])

    def negate(self, root: int) -> int:
        P = self.npos
        return root + P if root < P else root - P

    def is_positive(self, root: int) -> bool:
        return root < self.npos

    @cached_property
    def left_gen_conj(self) -> np.ndarray:
        """``[k, w]`` = reflection index of w^{-1} s_k w (every such element is a reflection)."""
        out = np.empty((self.rank, self.order), dtype=np.int64)
        inv = self.inverse
        for k, s in enumerate(self.gens):
            # w^{-1} s w = s_beta with beta = w^{-1}(alpha_s) up to sign
            beta = self.perms[inv, k]
            out[k] = np.where(beta < self.npos, beta, beta - self.npos)
        return out

    @cached_property
    def conj_classes(self) -> list[list[int]]:
        """Conjugacy classes of W (lists of element indices), ordered by least member."""
        tab = self.table
        inv = self.inverse
        label = -np.ones(self.order, dtype=np.int64)
        classes = []
        for w in range(self.order):
            if label[w] >= 0:
                continue
            members = np.unique(tab[tab[inv, w], np.arange(self.order)])
            label[members] = len(classes)
            classes.append(members.tolist())
        self._class_of = label
        return classes

    @property
    def class_of(self) -> np.ndarray:
        self.conj_classes
        return self._class_of

    def reflection_subgroup(self, I: Iterable[int]) -> ReflectionSubgroupData:
        I = tuple(sorted(set(int(r) for r in I)))
        elems = subgroup_closure(self, [self.reflections[r] for r in I])
        reps = coset_representatives(self, elems)
        return ReflectionSubgroupData(I, elems, reps)

    def direct_product_split(self) -> list[list[int]]:
        return self.matrix.components()

    # ---- serialization

    def to_json(self) -> dict:
        return {
            "format": "gendescent.coxeter-group",
            "version": CACHE_VERSION,
            "matrix": self.matrix.to_json(),
            "field": {"N": self.field.N, "minpoly": list(self.field.minpoly)},
            "positive_roots": [[x.to_json() for x in self.roots[i].coords] for i in range(self.npos)],
            "words": [list(w) for w in self.words],
            "perms": self.perms.tolist(),
            "reflections": list(self.reflections),
            "reflection_classes": self.refl_classes,
            "w0": self.w0,
        }

    @classmethod
    def from_json(cls, data: dict, validate: bool = True) -> "CoxeterGroup":
        if data.get("format") != "gendescent.coxeter-group" or data.get("version") != CACHE_VERSION:
            raise ValueError("unsupported group cache format")
        matrix = CoxeterMatrix.from_json(data["matrix"])
        fld = make_field(int(data["field"]["N"]))
        if list(fld.minpoly) != list(data["field"]["minpoly"]):
            raise IntegrityError("cached minimal polynomial does not match")
        roots = [tuple(fld([Fraction(c) for c in x]) for x in r) for r in data["positive_roots"]]
        perms = np.array(data["perms"], dtype=np.int32)
        words = [tuple(w) for w in data["words"]]
        g = cls(matrix, fld, roots, perms, words)
        if g.reflections != data["reflections"] or g.refl_classes != data["reflection_classes"] or g.w0 != data["w0"]:
            raise IntegrityError("cached reflection data is inconsistent")
        if validate:
            g.validate()
        return g

    def validate(self) -> None:
        """Check the structural invariants; raise IntegrityError on failure."""
        P = self.npos
        gram = gram_matrix(self.matrix, self.field)
        coords = [r.coords for r in self.roots[:P]]
        gen_perms = generator_perms(coords, gram)
        if not np.array_equal(gen_perms, self.perms[1:self.rank + 1]):
            raise IntegrityError("generator permutations do not match root data")
        if len(self.roots) != 2 * len(self.reflections):
            raise IntegrityError("|Phi| != 2|T|")
        neg = np.concatenate([np.arange(P, 2 * P), np.arange(P)])
        if not np.array_equal(self.perms[:, neg], neg[self.perms]):
            raise IntegrityError("element action does not commute with negation")
        for w, word in enumerate(self.words):
            if len(word) != self.lengths[w]:
                raise IntegrityError(f"word of element {w} is not reduced")
            perm = np.arange(2 * P)
            for k in word:
                perm = perm[gen_perms[k]]
            if not np.array_equal(perm, self.perms[w]):
                raise IntegrityError(f"word of element {w} does not multiply out")
        nsets = {self.perms[w, :P].tobytes() for w in range(self.order)}
        if len(nsets) != self.order:
            raise IntegrityError("elements are not distinct")
        if len({self.n_set(w) for w in range(self.order)}) != self.order:
            raise IntegrityError("w -> N(w) is not injective")
        if self.length(self.w0) != P or self.product(self.w0, self.w0) != 0:
            raise IntegrityError("w0 is not the longest involution")


class _CodeIndex:
    """Map rows of simple-root images to element indices."""

    def __init__(self, keys: np.ndarray, base: int):
        n = keys.shape[1]
        self.use_int = n * np.log2(max(base, 2)) < 62
        self.base = base
        if self.use_int:
            codes = self._codes(keys)
            self.order = np.argsort(codes)
            self.sorted = codes[self.order]
            if len(np.unique(self.sorted)) != len(self.sorted):
                raise IntegrityError("duplicate elements")
        else:
            self.dict = {row.tobytes(): i for i, row in enumerate(np.ascontiguousarray(keys, dtype=np.int64))}

    def _codes(self, keys: np.ndarray) -> np.ndarray:
        keys = keys.astype(np.int64)
        codes = np.zeros(keys.shape[0], dtype=np.int64)
        for k in range(keys.shape[1] - 1, -1, -1):
            codes = codes * self.base + keys[:, k]
        return codes

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        if self.use_int:
            codes = self._codes(keys)
            pos = np.searchsorted(self.sorted, codes)
            pos = np.minimum(pos, len(self.sorted) - 1)
            if not np.array_equal(self.sorted[pos], codes):
                raise KeyError("element not found")
            return self.order[pos].astype(np.int64)
        keys = np.ascontiguousarray(keys, dtype=np.int64)
        return np.array([self.dict[row.tobytes()] for row in keys], dtype=np.int64)


# ---------------------------------------------------------------- building


def gram_matrix(matrix: CoxeterMatrix, fld: FieldSpec) -> list[list[FieldElement]]:
    n = matrix.rank
    return [[-cos_value(fld, matrix.m(i, j)) for j in range(n)] for i in range(n)]


def reflect(gram, i: int, v: tuple[FieldElement, ...]) -> tuple[FieldElement, ...]:
    b = sum((gram[i][j] * v[j] for j in range(len(v)) if v[j]), gram[i][i].spec.zero)
    if not b:
        return v
    out = list(v)
    out[i] = out[i] - 2 * b
    return tuple(out)


def positive_roots(matrix: CoxeterMatrix, fld: FieldSpec, max_roots: int = DEFAULT_MAX_ROOTS):
    n = matrix.rank
    gram = gram_matrix(matrix, fld)
    simple = [tuple(fld.one if j == i else fld.zero for j in range(n)) for i in range(n)]
    roots = list(simple)
    index = {r: i for i, r in enumerate(roots)}
    queue = deque(range(n))
    while queue:
        a = queue.popleft()
        for i in range(n):
            if a == i:
                continue
            b = reflect(gram, i, roots[a])
            if b not in index:
                index[b] = len(roots)
                roots.append(b)
                if len(roots) > max_roots:
                    raise GroupTooLargeError("group appears infinite or max_roots too small")
                queue.append(index[b])
    return roots, gram


def generator_perms(roots, gram) -> np.ndarray:
    """Permutation of all 2P roots induced by each simple reflection."""
    P = len(roots)
    n = len(gram)
    index = {r: i for i, r in enumerate(roots)}
    out = np.empty((n, 2 * P), dtype=np.int32)
    for i in range(n):
        for a, r in enumerate(roots):
            if a == i:
                img = a + P
            else:
                img = index.get(reflect(gram, i, r))
                if img is None:
                    raise IntegrityError("root set is not closed under reflections")
            out[i, a] = img
            out[i, a + P] = img + P if img < P else img - P
    return out


def build_group(matrix: CoxeterMatrix, max_roots: int = DEFAULT_MAX_ROOTS) -> CoxeterGroup:
    if not matrix.is_finite_bonded():
        raise ValueError("infinite bonds are not supported here; see gendescent.dihedral")
    fld = make_field(matrix.conductor())
    roots, gram = positive_roots(matrix, fld, max_roots)
    gen_perms = generator_perms(roots, gram)
    n = matrix.rank
    P = len(roots)
    ident = np.arange(2 * P, dtype=np.int32)
    perms = [ident]
    words: list[tuple[int, ...]] = [()]
    seen = {ident[:n].tobytes(): 0}
    head = 0
    while head < len(perms):
        w = perms[head]
        for k in range(n):
            ws = w[gen_perms[k]]
            key = ws[:n].tobytes()
            if key not in seen:
                seen[key] = len(perms)
                perms.append(ws)
                words.append(words[head] + (k,))
        head += 1
    return CoxeterGroup(matrix, fld, roots, np.array(perms, dtype=np.int32), words)


def subgroup_closure(g: CoxeterGroup, generators: Sequence[int]) -> np.ndarray:
    members = np.zeros(g.order, dtype=bool)
    members[0] = True
    gens = np.array(sorted(set(generators)), dtype=np.int64)
    frontier = np.array([0])
    tab = g.table
    while len(frontier) and len(gens):
        new = np.unique(tab[np.ix_(frontier, gens)])
        new = new[~members[new]]
        members[new] = True
        frontier = new
    return np.nonzero(members)[0]


def coset_representatives(g: CoxeterGroup, subgroup: np.ndarray) -> np.ndarray:
    """Minimal-length elements of the left cosets w W_I (asserted unique)."""
    cosets = g.table[:, subgroup]
    lens = g.lengths[cosets]
    mins = lens.min(axis=1)
    if np.any((lens == mins[:, None]).sum(axis=1) != 1):
        raise IntegrityError("a coset has more than one element of minimal length")
    reps = cosets[np.arange(g.order), lens.argmin(axis=1)]
    reps = np.unique(reps)
    if len(reps) * len(subgroup) != g.order:
        raise IntegrityError("|X_I| * |W_I| != |W|")
    return reps


# ---------------------------------------------------------------- cache


def cache_key(matrix: CoxeterMatrix) -> str:
    from . import __version__

    payload = json.dumps({"m": matrix.to_json(), "v": __version__, "c": CACHE_VERSION}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:24]


def load_or_build(matrix: CoxeterMatrix, cache_dir=None, max_roots: int = DEFAULT_MAX_ROOTS) -> CoxeterGroup:
    """Build a group, going through a content-addressed JSON cache if a directory is given."""
    if cache_dir is None:
        return build_group(matrix, max_roots)
    from pathlib import Path

    path = Path(cache_dir) / f"group-{cache_key(matrix)}.json"
    if path.exists():
        try:
            return CoxeterGroup.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError, IntegrityError, json.JSONDecodeError):
            pass  # stale or corrupt: rebuild silently
    g = build_group(matrix, max_roots)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(g.to_json()))
    return g
