"""Submodules of the group algebra ZW: descent algebras D_A(W) and the modules Sigma_A(W)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .coxeter import CoxeterGroup, build_group, subgroup_closure, coset_representatives
from .descent import DescentTable, ReflectionSet, admissible_sets, reflection_set
from .lattice import Lattice, nullspace_q, rank_q, rref, solve_q

DEFAULT_GENERATOR_BUDGET = 20_000

Scalar = Union[int, Fraction]


class BudgetError(RuntimeError):
    pass


class GroupAlgebraVector:
    """Sparse element of ZW (or QW) keyed by element index."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict] = None):
        self.coeffs = {int(k): v for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def from_elements(cls, elements: Iterable[int], coeff: Scalar = 1) -> "GroupAlgebraVector":
        return cls({int(w): coeff for w in elements})

    @classmethod
    def from_dense(cls, arr) -> "GroupAlgebraVector":
        return cls({i: (int(x) if isinstance(x, (np.integer, int)) else x) for i, x in enumerate(arr) if x != 0})

    @classmethod
    def basis_element(cls, w: int) -> "GroupAlgebraVector":
        return cls({w: 1})

    def dense(self, n: int, dtype=np.int64) -> np.ndarray:
        if dtype is not object and not self.is_integral():
            dtype = object
        out = np.zeros(n, dtype=dtype)
        for k, v in self.coeffs.items():
            out[k] = v
        return out

    def is_integral(self) -> bool:
        return all(isinstance(v, (int, np.integer)) or v.denominator == 1 for v in self.coeffs.values())

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def __getitem__(self, w: int):
        return self.coeffs.get(w, 0)

    def __add__(self, other: "GroupAlgebraVector") -> "GroupAlgebraVector":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GroupAlgebraVector(out)

    def __sub__(self, other: "GroupAlgebraVector") -> "GroupAlgebraVector":
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, c: Scalar) -> "GroupAlgebraVector":
        return GroupAlgebraVector({k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupAlgebraVector) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"GroupAlgebraVector({dict(sorted(self.coeffs.items()))})"

    def __bool__(self):
        return bool(self.coeffs)


def convolve(g: CoxeterGroup, a: GroupAlgebraVector, b: GroupAlgebraVector) -> GroupAlgebraVector:
    """Product in the group algebra."""
    out: dict = {}
    tab = g.table
    bs = list(b.coeffs.items())
    bi = np.array([k for k, _ in bs], dtype=np.int64)
    for u, cu in a.coeffs.items():
        row = tab[u, bi].tolist()
        for w, (_, cv) in zip(row, bs):
            out[w] = out.get(w, 0) + cu * cv
    return GroupAlgebraVector(out)


def convolve_dense(g: CoxeterGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense product: (ab)[w] = sum_u a[u] b[u^{-1} w]."""
    tab = g.table
    supp = np.flatnonzero(a)
    if a.dtype == object or b.dtype == object:
        shifted = b[tab[g.inverse[supp], :]]  # row u: w -> b[u^{-1} w]
        return (shifted * a[supp][:, None]).sum(axis=0)
    suppb = np.flatnonzero(b)
    idx = tab[np.ix_(supp, suppb)].ravel()  # u * v for u, v in the supports
    if np.all(a[supp] == 1) and np.all(b[suppb] == 1):
        return np.bincount(idx, minlength=g.order).astype(np.int64)
    weights = np.multiply.outer(a[supp], b[suppb]).ravel().astype(np.float64)
    if np.abs(weights).sum() >= 2 ** 52:
        shifted = b[tab[g.inverse[supp], :]]
        return a[supp] @ shifted
    return np.rint(np.bincount(idx, weights=weights, minlength=g.order)).astype(np.int64)


# ------------------------------------------------------------------ presentations


@dataclass
class AlgebraPresentation:
    group: CoxeterGroup
    labels: list
    basis: np.ndarray  # one dense row per generator vector
    rank: int
    closed: Optional[bool]
    has_unit: bool
    structure_constants: Optional[np.ndarray] = None  # c[I, J, K]
    witness: Optional[tuple] = None
    info: dict = field(default_factory=dict)

    def vectors(self) -> list[GroupAlgebraVector]:
        return [GroupAlgebraVector.from_dense(r) for r in self.basis]

    def vector(self, label) -> GroupAlgebraVector:
        return GroupAlgebraVector.from_dense(self.basis[self.labels.index(label)])

    def coordinates(self, v: Union[GroupAlgebraVector, np.ndarray]) -> Optional[list[Fraction]]:
        """Rational coordinates of v in the basis rows (requires independent rows)."""
        if isinstance(v, GroupAlgebraVector):
            v = v.dense(self.group.order, dtype=object)
        cols = _independent_columns(self.basis)
        sol = solve_q([[r[c] for c in cols] for r in self.basis], [v[c] for c in cols])
        if sol is None:
            return None
        recon = np.zeros(self.group.order, dtype=object)
        for c, r in zip(sol, self.basis):
            if c:
                recon = recon + np.array([c * int(x) for x in r], dtype=object)
        if any(Fraction(x) != Fraction(y) for x, y in zip(recon, v)):
            return None
        return sol

    def rational_structure_constants(self) -> list:
        """c[i][j][k] over Q in the basis rows (rows must be independent and closed over Q)."""
        if self.structure_constants is not None:
            c = self.structure_constants
            k = len(self.labels)
            return [[[Fraction(int(c[i, j, l])) for l in range(k)] for j in range(k)] for i in range(k)]
        k = len(self.basis)
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                prod = convolve_dense(self.group, self.basis[i], self.basis[j])
                coords = self.coordinates(prod)
                if coords is None:
                    raise ValueError("the span is not closed under multiplication")
                row.append(coords)
            out.append(row)
        return out


def _independent_columns(basis: np.ndarray) -> list[int]:
    # greedy pivot columns over Q using the lattice echelon form of the transpose problem
    _, piv = rref([[int(x) for x in r] for r in basis], basis.shape[1])
    return piv


def descent_algebra(g: CoxeterGroup, A, table: Optional[DescentTable] = None,
                    oracle: bool = True) -> AlgebraPresentation:
    """D_A(W) with closure test and structure constants.

    Closure is decided from the full products d_I d_J, which must be constant on
    every descent class.  When closed, the structure constants are recomputed by
    counting factorizations z_K = uv with u in D_I, v in D_J and compared.
    """
    A = reflection_set(g, A)
    if table is None:
        table = admissible_sets(g, A)
    k = len(table)
    n = g.order
    tab = g.table
    cls = table.class_of
    rep = table.rep_of_element
    reps = np.array(table.reps, dtype=np.int64)
    dtype = np.int32 if n > 30000 else np.int16
    consts = np.zeros((k, k, k), dtype=dtype)
    closed, witness = True, None
    for I in range(k):
        DI = table.classes[I]
        idx = (tab[DI, :].astype(np.int64) * k + cls[None, :]).ravel()
        C = np.bincount(idx, minlength=n * k).reshape(n, k)  # C[w, J] = coeff of w in d_I d_J
        diff = np.flatnonzero(np.any(C != C[rep], axis=1))
        if len(diff):
            w = int(diff[0])
            J = int(np.flatnonzero(C[w] != C[rep[w]])[0])
            closed, witness = False, (I, J, w, int(rep[w]))
            break
        consts[I] = C[reps].T  # consts[I, J, K] = C[z_K, J]
    basis = np.zeros((k, n), dtype=np.int64)
    basis[cls, np.arange(n)] = 1
    info = {"admissible": [sorted(I) for I in table.admissible], "reps": table.reps}
    pres = AlgebraPresentation(
        g, [table.label(i) for i in range(k)], basis, k, closed,
        has_unit=len(table.classes[cls[0]]) == 1,
        structure_constants=consts if closed else None,
        witness=witness, info=info,
    )
    if closed and oracle:
        counted = counting_constants(g, table)
        if not np.array_equal(counted, consts):
            raise AssertionError("counting and convolution structure constants disagree")
        pres.info["oracle_agrees"] = True
    return pres


def counting_constants(g: CoxeterGroup, table: DescentTable) -> np.ndarray:
    """c[I, J, K] = |{(u, v) in D_I x D_J : uv = z_K}| by direct counting."""
    k = len(table)
    tab = g.table
    cls = table.class_of
    out = np.zeros((k, k, k), dtype=np.int32 if g.order > 30000 else np.int16)
    us = np.arange(g.order)
    for K, z in enumerate(table.reps):
        vs = tab[g.inverse, z]  # v = u^{-1} z
        out[:, :, K] = np.bincount(cls * k + cls[vs], minlength=k * k).reshape(k, k)
    return out


# ------------------------------------------------------------------ Sigma_A


@dataclass
class SubgroupInfo:
    label: frozenset  # W_I cap A, the canonical generating set
    elements: np.ndarray
    reps: np.ndarray

    def x_vector(self, n: int) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        v[self.reps] = 1
        return v


def reflection_subgroups(g: CoxeterGroup, A, budget: int = DEFAULT_GENERATOR_BUDGET) -> list[SubgroupInfo]:
    """The distinct subgroups W_I, I subset of A, each labelled by W_I cap A.

    Ordered by (|label|, sorted label)."""
    A = reflection_set(g, A)
    members = A.sorted()
    relts = np.array([g.reflections[r] for r in members], dtype=np.int64)
    tab = g.table

    def label_of(mask: np.ndarray) -> frozenset:
        return frozenset(r for r, e in zip(members, relts) if mask[e])

    start = np.zeros(g.order, dtype=bool)
    start[0] = True
    found = {label_of(start): start}
    queue = [frozenset()]
    while queue:
        lab = queue.pop()
        mask = found[lab]
        for r, e in zip(members, relts):
            if r in lab:
                continue
            gens = np.array([g.reflections[x] for x in lab] + [int(e)], dtype=np.int64)
            new = mask.copy()
            frontier = np.flatnonzero(new)
            while len(frontier):
                cand = np.unique(tab[np.ix_(frontier, gens)])
                cand = cand[~new[cand]]
                new[cand] = True
                frontier = cand
            nl = label_of(new)
            if nl not in found:
                found[nl] = new
                queue.append(nl)
                if len(found) > budget:
                    raise BudgetError("A too large for sigma enumeration")
    out = []
    for lab in sorted(found, key=lambda s: (len(s), sorted(s))):
        elems = np.flatnonzero(found[lab])
        out.append(SubgroupInfo(lab, elems, coset_representatives(g, elems)))
    return out


def _subset_label(g: CoxeterGroup, I) -> str:
    if not I:
        return "{}"
    return "{" + ",".join(g.refl_label(r) for r in sorted(I)) + "}"


def _check_closed(g: CoxeterGroup, lattice: Lattice, gens: Sequence[np.ndarray], labels: Sequence):
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            prod = convolve_dense(g, a, b)
            if prod not in lattice:
                return False, (labels[i], labels[j])
    return True, None


def sigma_module(g: CoxeterGroup, A, budget: int = DEFAULT_GENERATOR_BUDGET,
                 table: Optional[DescentTable] = None, check_closed: bool = True) -> AlgebraPresentation:
    """Sigma_A(W), the Z-span of all x_I for I subset of A."""
    A = reflection_set(g, A)
    subs = reflection_subgroups(g, A, budget)
    n = g.order
    vecs = [s.x_vector(n) for s in subs]
    labels = [_subset_label(g, s.label) for s in subs]
    lat = Lattice(n)
    spanning = []
    for i, v in enumerate(vecs):
        if lat.add(v):
            spanning.append(i)
    closed, witness = None, None
    if check_closed:
        closed, witness = _check_closed(g, lat, [vecs[i] for i in spanning], [labels[i] for i in spanning])
    if table is None:
        table = admissible_sets(g, A)
    rep = table.rep_of_element
    in_D = all(np.array_equal(v, v[rep]) for v in vecs)
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    info = {
        "subsets": [sorted(s.label) for s in subs],
        "num_generators": len(subs),
        "x_basis": len(subs) == lat.rank,
        "contained_in_D": in_D,
        "spanning": spanning,
        "lattice": lat,
    }
    return AlgebraPresentation(g, labels, np.array(vecs), lat.rank, closed, unit in lat,
                               witness=witness, info=info)


def _conjugacy_key(g: CoxeterGroup, elems: np.ndarray) -> bytes:
    tab = g.table
    best = None
    for x in range(g.order):
        conj = np.sort(tab[tab[x, elems], g.inverse[x]])
        key = conj.astype(np.int32).tobytes()
        if best is None or key < best:
            best = key
    return best


def sigma1_module(g: CoxeterGroup, A, budget: int = DEFAULT_GENERATOR_BUDGET) -> AlgebraPresentation:
    """Z-span of x_I - x_J over pairs I, J in P_0(A) with W_I, W_J conjugate."""
    A = reflection_set(g, A)
    subs = reflection_subgroups(g, A, budget)
    n = g.order
    groups: dict = {}
    for i, s in enumerate(subs):
        groups.setdefault(_conjugacy_key(g, s.elements), []).append(i)
    vecs, labels = [], []
    for members in groups.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                vecs.append(subs[i].x_vector(n) - subs[j].x_vector(n))
                labels.append((_subset_label(g, subs[i].label), _subset_label(g, subs[j].label)))
    lat = Lattice(n, vecs)
    basis = np.array(vecs) if vecs else np.zeros((0, n), dtype=np.int64)
    info = {"classes": [[sorted(subs[i].label) for i in m] for m in groups.values()], "lattice": lat}
    return AlgebraPresentation(g, labels, basis, lat.rank, None, False, info=info)


def sigma_in_descent(g: CoxeterGroup, A, subsets: Iterable) -> bool:
    """Whether every x_I (I in subsets) lies in D_A(W), i.e. is constant on descent classes."""
    table = admissible_sets(g, A)
    rep = table.rep_of_element
    for I in subsets:
        info = g.reflection_subgroup(I)
        v = np.zeros(g.order, dtype=np.int64)
        v[info.coset_reps] = 1
        if not np.array_equal(v, v[rep]):
            return False
    return True


# ------------------------------------------------------------------ radical


def radical(constants: Sequence, unit: Optional[Sequence] = None) -> list[list[Fraction]]:
    """Radical of a finite-dimensional Q-algebra given by structure constants.

    ``constants[i][j][k]`` is the coefficient of e_k in e_i e_j.  The radical is
    the kernel of the trace form tr(L_x L_y); the result is checked to be a
    nilpotent ideal before it is returned.
    """
    k = len(constants)
    c = [[[Fraction(constants[i][j][l]) for l in range(k)] for j in range(k)] for i in range(k)]
    if unit is not None:
        u = [Fraction(x) for x in unit]
        for j in range(k):
            left = [sum(u[i] * c[i][j][l] for i in range(k)) for l in range(k)]
            right = [sum(u[i] * c[j][i][l] for i in range(k)) for l in range(k)]
            e = [Fraction(int(l == j)) for l in range(k)]
            if left != e or right != e:
                raise ValueError("the given unit is not a two-sided identity")
    # L_i[l][j] = c[i][j][l]; tr(L_a L_b) = sum_{j,l} c[a][j][l] c[b][l][j]
    T = [[sum(c[a][j][l] * c[b][l][j] for j in range(k) for l in range(k)) for b in range(k)]
         for a in range(k)]
    rad = nullspace_q(T, k)
    _check_nilpotent(c, rad)
    return rad


def _mult(c, x, y):
    k = len(c)
    out = [Fraction(0)] * k
    for i in range(k):
        if not x[i]:
            continue
        for j in range(k):
            if not y[j]:
                continue
            f = x[i] * y[j]
            row = c[i][j]
            for l in range(k):
                if row[l]:
                    out[l] += f * row[l]
    return out


def _check_nilpotent(c, rad):
    k = len(c)
    power = rad
    for _ in range(k + 1):
        if not power:
            return
        prods = [_mult(c, x, y) for x in power for y in rad]
        prods = [p for p in prods if any(p)]
        if not prods:
            return
        R, _ = rref(prods, k)
        if len(R) >= len(power) and power is not rad:
            break
        power = [list(r) for r in R]
    raise AssertionError("trace-form kernel is not nilpotent")


def algebra_multiply(constants, x: Sequence, y: Sequence) -> list[Fraction]:
    k = len(constants)
    c = [[[Fraction(constants[i][j][l]) for l in range(k)] for j in range(k)] for i in range(k)]
    return _mult(c, [Fraction(a) for a in x], [Fraction(b) for b in y])


# ------------------------------------------------------------------ products


@dataclass
class TensorReport:
    ok: bool
    components: list
    ranks: tuple
    details: str = ""

    def __bool__(self):
        return self.ok


def tensor_check(g: CoxeterGroup, A) -> TensorReport:
    """Check D_A(W) = D_{A cap W1}(W1) (x) D_{A cap W2}(W2) for a reducible W."""
    A = reflection_set(g, A)
    comps = g.direct_product_split()
    if len(comps) < 2:
        raise ValueError("Coxeter diagram is connected")
    J1 = comps[0]
    J2 = sorted(i for c in comps[1:] for i in c)
    factors = []
    for J in (J1, J2):
        h = build_group(g.matrix.restrict(J))
        embed = np.array([g.element([J[k] for k in word]) for word in h.words], dtype=np.int64)
        refl_map = {r: g.refl_of_element[int(embed[e])] for r, e in enumerate(h.reflections)}
        Ah = frozenset(r for r, rw in refl_map.items() if rw in A.members)
        factors.append((h, embed, refl_map, Ah))
    (h1, e1, m1, A1), (h2, e2, m2, A2) = factors
    if {m1[r] for r in A1} | {m2[r] for r in A2} != set(A.members):
        return TensorReport(False, [J1, J2], (), "A is not the union of its parts")
    prod = g.table[np.ix_(e1, e2)]  # (a, b) -> ab
    if len(np.unique(prod)) != g.order:
        return TensorReport(False, [J1, J2], (), "W1 x W2 -> W is not bijective")
    T = admissible_sets(g, A)
    T1 = admissible_sets(h1, A1)
    T2 = admissible_sets(h2, A2)
    if len(T) != len(T1) * len(T2):
        return TensorReport(False, [J1, J2], (len(T), len(T1), len(T2)), "ranks do not multiply")
    # class pairing: (I1, I2) -> I
    pair_to = {}
    for i1, I1 in enumerate(T1.admissible):
        for i2, I2 in enumerate(T2.admissible):
            I = frozenset(m1[r] for r in I1) | frozenset(m2[r] for r in I2)
            if I not in T.admissible:
                return TensorReport(False, [J1, J2], (), f"{sorted(I)} is not admissible")
            K = T.index(I)
            expected = np.sort(prod[np.ix_(T1.classes[i1], T2.classes[i2])].ravel())
            if not np.array_equal(expected, np.sort(T.classes[K])):
                return TensorReport(False, [J1, J2], (), f"class {sorted(I)} does not factor")
            pair_to[(i1, i2)] = K
    D = descent_algebra(g, A, T)
    D1 = descent_algebra(h1, A1, T1)
    D2 = descent_algebra(h2, A2, T2)
    if D.closed != (D1.closed and D2.closed):
        return TensorReport(False, [J1, J2], (), "closure verdicts disagree")
    if D.closed:
        c, c1, c2 = D.structure_constants, D1.structure_constants, D2.structure_constants
        for (i1, i2), I in pair_to.items():
            for (j1, j2), J in pair_to.items():
                for (k1, k2), K in pair_to.items():
                    if int(c[I, J, K]) != int(c1[i1, j1, k1]) * int(c2[i2, j2, k2]):
                        return TensorReport(False, [J1, J2], (), "structure constants do not factor")
    return TensorReport(True, [J1, J2], (len(T), len(T1), len(T2)))
