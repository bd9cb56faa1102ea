"""Regression suite: every stored table and structural property, recomputed from scratch.

Sections (selectable with ``--only``):

``coxeter``   root/length/coset invariants on small groups
``descent``   admissible sets, descent classes, niceness and the family closure property
``dihedral``  A = {s,t,sts} tables, idempotents, B = {s} u C(t) ranks, characters
``g2``        the full G2 tables for B
``f4``        ranks and closure verdicts for F4, A = C(s1) u S
``infinite``  bounded niceness in the infinite dihedral group
"""
from __future__ import annotations

import itertools
import time
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .algebra import descent_algebra, sigma_module, tensor_check
from .coxeter import CoxeterGroup, build_group, named_type
from .descent import (admissible_sets, descent_equiv_classes, is_left_connected, is_nice, reflection_set,
                      simple_reflections, theorem_family, all_reflections, psi)
from .dihedral import (Report, DihedralGroup, _verify_g2, char_table, check_induced_characters,
                       infinite_nice_check, load_expected, verify_A_tables, verify_B_tables)

PROPERTY_TYPES = ("A2", "A3", "B2", "B3", "G2", "H3", "I2_8", "I2_10", "B2xA1")


# ------------------------------------------------------------------ groups

_GROUPS: dict = {}


def group(name: str) -> CoxeterGroup:
    if name not in _GROUPS:
        _GROUPS[name] = build_group(named_type(name))
    return _GROUPS[name]


def family_sets(g: CoxeterGroup) -> list:
    """Distinct sets S1 u C(S2) over all pairs (S1, S2) of subsets of S, in a fixed order."""
    n = g.rank
    seen, out = set(), []
    for m1 in range(1 << n):
        for m2 in range(1 << n):
            S1 = [k for k in range(n) if m1 >> k & 1]
            S2 = [k for k in range(n) if m2 >> k & 1]
            A = theorem_family(g, S1, S2)
            if A.members not in seen:
                seen.add(A.members)
                out.append(A)
    return out


# ------------------------------------------------------------------ coxeter


def coxeter_properties(g: CoxeterGroup, name: str = "") -> Report:
    rep = Report()
    p = f"coxeter[{name}]"
    P = g.npos
    neg = g.perms[:, :P] >= P  # [w, alpha] = w(alpha) < 0
    rep.check(f"{p}.length_is_|N|", bool(np.array_equal(neg.sum(axis=1), g.lengths)), True)
    rep.check(f"{p}.word_reduced", all(len(g.words[w]) == g.lengths[w] for w in range(g.order)), True)
    rep.check(f"{p}.N_injective", len({row.tobytes() for row in np.packbits(neg, axis=1)}), g.order)
    rep.check(f"{p}.|Phi|=2|T|", (len(g.roots), g.nrefl), (2 * P, P))
    rep.check(f"{p}.w0", (int(g.lengths[g.w0]), g.product(g.w0, g.w0)), (P, 0))
    # (a): l(w s_alpha) > l(w) <=> w(alpha) > 0
    tab = g.table
    longer = g.lengths[tab[:, g.reflections]] > g.lengths[:, None]
    rep.check(f"{p}.length_vs_root_sign", bool(np.array_equal(longer, ~neg)), True)
    # (b): l(sw) > l(w) => N(sw) = N(w) + {w^-1 alpha_s}; otherwise N(sw) = N(w) - {-w^-1 alpha_s}
    ok = True
    for k, s in enumerate(g.gens):
        for w in range(g.order):
            sw = int(tab[s, w])
            beta = int(g.perms[g.inverse[w], k])  # w^{-1}(alpha_s)
            Nw, Nsw = g.n_set(w), g.n_set(sw)
            if g.lengths[sw] > g.lengths[w]:
                ok &= beta < P and Nsw == Nw | {beta}
            else:
                ok &= beta >= P and Nw == Nsw | {beta - P}
    rep.check(f"{p}.N(sw)_formula", ok, True)
    ok = True
    for r in range(min(g.nrefl, 8)):
        info = g.reflection_subgroup([r, 0])
        ok &= len(info.coset_reps) * info.order == g.order
    rep.check(f"{p}.|X_I||W_I|=|W|", ok, True)
    return rep


# ------------------------------------------------------------------ descent / algebra


def descent_properties(g: CoxeterGroup, A, name: str = "", tensor: bool = False) -> Report:
    """Structural properties of one reflection set A (all exhaustive over W)."""
    A = reflection_set(g, A)
    rep = Report()
    p = f"descent[{name};{','.join(A.labels())}]"
    T = admissible_sets(g, A)
    adm = set(T.admissible)
    contains_S = A.contains_S
    rep.check(f"{p}.empty_admissible", frozenset() in adm, True)
    rep.check(f"{p}.A_admissible", frozenset(A.members) in adm, True)
    rep.check(f"{p}.complement_closed", all(frozenset(A.members) - I in adm for I in adm), True)
    rep.check(f"{p}.D_empty={{1}}<=>S<=A", len(T.classes[T.index(frozenset())]) == 1, contains_S)
    rep.check(f"{p}.D_A={{w0}}<=>S<=A", list(T.classes[T.index(A.members)]) == [g.w0], contains_S)
    w0w = g.table[g.w0, :]
    rep.check(f"{p}.w0_complement",
              all(T.descent_of(int(w0w[w])) == frozenset(A.members) - T.descent_of(w) for w in range(g.order)), True)
    full = admissible_sets(g, all_reflections(g))
    rep.check(f"{p}.monotone",
              all(T.descent_of(w) == full.descent_of(w) & A.members for w in range(g.order)), True)
    classes = descent_equiv_classes(g, A)
    rep.check(f"{p}.equivalence=fibres", sorted(sorted(c) for c in classes),
              sorted(sorted(c.tolist()) for c in T.classes))
    rep.check(f"{p}.left_connected", all(is_left_connected(g, c) for c in T.classes), True)
    # N_A(w) = N_A(sw) when w^-1 s w is not in A
    ok = True
    Am = sorted(A.members)
    for k, s in enumerate(g.gens):
        out = ~np.isin(g.left_gen_conj[k], Am)
        for w in np.flatnonzero(out).tolist():
            sw = int(g.table[s, w])
            ok &= np.array_equal(g.perms[w, Am] >= g.npos, g.perms[sw, Am] >= g.npos)
    rep.check(f"{p}.N_A_invariance", ok, True)
    nice = is_nice(g, A, T)
    D = descent_algebra(g, A, T)
    rep.check(f"{p}.has_unit<=>S<=A", D.has_unit, contains_S)
    rep.check(f"{p}.nice=>closed", (not nice.nice) or D.closed, True)
    if D.closed:
        rep.check(f"{p}.counting=convolution", D.info.get("oracle_agrees"), True)
    if contains_S:
        rep.check(f"{p}.solomon_inside", _solomon_inside(g, T), True)
    if tensor:
        rep.check(f"{p}.tensor", bool(tensor_check(g, A)), True)
    return rep


def _solomon_inside(g: CoxeterGroup, T) -> bool:
    rep = T.rep_of_element
    for mask in range(1 << g.rank):
        I = [k for k in range(g.rank) if mask >> k & 1]
        v = np.zeros(g.order, dtype=np.int64)
        v[g.reflection_subgroup(I).coset_reps] = 1
        if not np.array_equal(v, v[rep]):
            return False
    return True


def family_suite(name: str) -> Report:
    """Every family set S1 u C(S2) of the named type: nice, closed, and the structural checks."""
    g = group(name)
    rep = Report()
    tensor = len(g.direct_product_split()) > 1
    for A in family_sets(g):
        rep.check(f"family[{name};{','.join(A.labels())}].nice", bool(is_nice(g, A)), True)
        rep.check(f"family[{name};{','.join(A.labels())}].closed", descent_algebra(g, A).closed, True)
        rep.extend(descent_properties(g, A, name, tensor=tensor))
    return rep


def psi_checks(g: CoxeterGroup, A, name: str = "", samples: int = 100, seed: int = 0) -> Report:
    """psi_s is an involution; for nice A it carries factorizations of w to those of sw."""
    from .descent import factorizations, neighbours
    A = reflection_set(g, A)
    rep = Report()
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(samples):
        k = int(rng.integers(g.rank))
        u, v = (int(x) for x in rng.integers(g.order, size=2))
        ok &= psi(g, A, k, psi(g, A, k, (u, v))) == (u, v)
    rep.check(f"psi[{name}].involution", ok, True)
    if is_nice(g, A):
        T = admissible_sets(g, A)
        ok = True
        for _ in range(samples):
            w = int(rng.integers(g.order))
            k = int(rng.integers(g.rank))
            sw = g.product(g.gens[k], w)
            if not neighbours(g, A, w, sw):
                continue
            I, J = (int(x) for x in rng.integers(len(T), size=2))
            src = factorizations(g, T, I, J, w)
            ok &= {psi(g, A, k, pair) for pair in src} == factorizations(g, T, I, J, sw)
        rep.check(f"psi[{name}].bijection", ok, True)
    return rep


# ------------------------------------------------------------------ sections


def section_coxeter() -> Report:
    rep = Report()
    orders = {"A1": 2, "A2": 6, "A3": 24, "A4": 120, "B2": 8, "B3": 48, "B4": 384, "D4": 192,
              "G2": 12, "H3": 120, "F4": 1152, "I2_5": 10, "I2_8": 16, "B2xA1": 16}
    for name, order in orders.items():
        rep.check(f"coxeter[{name}].order", group(name).order, order)
    for name in ("A2", "B2", "G2", "A3", "B3", "H3"):
        rep.extend(coxeter_properties(group(name), name))
    b2 = group("B2")
    rep.check("coxeter[B2].classes", sorted(sorted(b2.refl_label(r) for r in c) for c in b2.refl_classes),
              [["s", "tst"], ["sts", "t"]])
    return rep


def section_descent(types: Sequence[str] = PROPERTY_TYPES) -> Report:
    rep = Report()
    for name in types:
        rep.extend(family_suite(name))
    b2 = group("B2")
    res = is_nice(b2, reflection_set(b2, ["s", "sts"]))
    rep.check("descent[B2;s,sts].nice", (res.nice, res.witness), (False, (3, 1)))
    for name in ("A2", "B2", "G2"):
        g = group(name)
        T = all_reflections(g)
        D = descent_algebra(g, T)
        rep.check(f"descent[{name};T].group_algebra", (D.rank, D.closed, bool(is_nice(g, T))), (g.order, True, True))
        S = descent_algebra(g, simple_reflections(g))
        rep.check(f"descent[{name};S].solomon", (S.rank, S.closed, S.has_unit), (1 << g.rank, True, True))
        rep.extend(psi_checks(g, theorem_family(g, [0], [1]), name))
    return rep


def section_dihedral(A_range: Iterable[int] = range(2, 9), B_range: Iterable[int] = range(2, 12)) -> Report:
    rep = Report()
    for m in A_range:
        rep.extend(verify_A_tables(m))
    for m in B_range:
        rep.extend(verify_B_tables(m))
    for m in range(2, 7):
        table = char_table(m)
        rep.check(f"chars[m={m}].count", len(table.names), m + 3)
        rep.check(f"chars[m={m}].orthonormal", table.check_orthonormal(), True)
        rep.check(f"chars[m={m}].induced", check_induced_characters(m), True)
        DihedralGroup(m).isomorphism()
        rep.add(f"normal_form[m={m}].isomorphism", True)
    return rep


def section_g2() -> Report:
    g = group("G2")
    return _verify_g2(g, theorem_family(g, ["s"], ["t"]))


def section_f4() -> Report:
    exp = load_expected("f4")
    g = group(exp["type"])
    A = theorem_family(g, exp["S1"], exp["S2"])
    rep = Report()
    rep.check("f4.size", len(A), exp["num_reflections"])
    T = admissible_sets(g, A)
    D = descent_algebra(g, A, T)
    rep.check("f4.D", (D.rank, D.closed, D.info.get("oracle_agrees", False)), (exp["rank_D"], exp["D_closed"], True))
    sig = sigma_module(g, A, table=T)
    rep.check("f4.sigma", (sig.rank, sig.closed), (exp["rank_sigma"], exp["sigma_closed"]))
    rep.check("f4.nice", bool(is_nice(g, A, T)), True)
    return rep


def section_infinite(L: int = 50) -> Report:
    rep = Report()
    for A in (["s", "t", "sts"], ["t", "sts"]):
        r = infinite_nice_check(A, L)
        rep.check(f"infinite[{','.join(A)};L={L}]", r.violations, [])
    r = infinite_nice_check(["s", "t", "tst"], 20)
    rep.check("infinite[s,t,tst;L=20]", (len(r.violations), r.checked), (0, 113))
    rep.check("infinite.elements(10)", len(DihedralGroup(None).elements(10)), 21)
    return rep


SECTIONS: dict[str, Callable[[], Report]] = {
    "coxeter": section_coxeter,
    "descent": section_descent,
    "dihedral": section_dihedral,
    "g2": section_g2,
    "f4": section_f4,
    "infinite": section_infinite,
}


def run_suite(only: Optional[Sequence[str]] = None, progress: Optional[Callable[[str, Report, float], None]] = None) -> dict:
    """Run the selected sections; returns {section: Report}."""
    names = list(SECTIONS) if not only else list(only)
    unknown = [n for n in names if n not in SECTIONS]
    if unknown:
        raise KeyError(f"unknown section(s): {', '.join(unknown)}; choose from {', '.join(SECTIONS)}")
    out = {}
    for name in names:
        t0 = time.perf_counter()
        out[name] = SECTIONS[name]()
        if progress:
            progress(name, out[name], time.perf_counter() - t0)
    return out
