"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines.
Exact quantities are compared with ``==``; the only tolerances are the
wall-clock bounds in ``BOUNDS`` (seconds).
"""
import time

import numpy as np
from gendescent.algebra import convolve_dense, counting_constants, descent_algebra, sigma_module
from gendescent.descent import admissible_sets, reflection_set, theorem_family
from gendescent.dihedral import (DihedralContext, Report, _check_common, infinite_nice_check, load_expected,
                                 verify_A_tables, verify_B_tables, verify_idempotents)
from gendescent.search import search_nice, theorem_form_sets
from gendescent.verify import PROPERTY_TYPES, family_sets, family_suite, group, section_g2

SUMMARY: list = []  # printed again at the end of the run by the conftest terminal-summary hook

BOUNDS = {1: 60.0, 2: 1.0, 3: 5.0, 4: 30.0, 5: 1.0, 6: 2.0, 7: 300.0, 8: 300.0, 9: 5.0, 10: 10.0}


def report(n, ok, elapsed, detail=""):
    in_time = elapsed <= BOUNDS[n]
    status = "PASS" if ok and in_time else "FAIL"
    extra = "" if in_time else f" [over time bound {BOUNDS[n]:g} s]"
    line = f"CRITERION {n:2d}: {status}  ({elapsed:.2f} s / bound {BOUNDS[n]:g} s){extra}  {detail}"
    SUMMARY.append(line)
    print("\n" + line)
    return ok and in_time


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_f4_family():
    def run():
        g = group("F4")
        A = theorem_family(g, ["s1", "s2", "s3", "s4"], ["s1"])
        T = admissible_sets(g, A)
        D = descent_algebra(g, A, T)
        sig = sigma_module(g, A, table=T)
        return D.rank, D.closed, sig.rank, sig.closed
    (rD, cD, rS, cS), dt = timed(run)
    ok = (rD, cD, rS, cS) == (300, True, 149, False)
    assert report(1, ok, dt, f"rank D={rD} closed={cD}; rank Sigma={rS} closed={cS}")


def test_criterion_02_dihedral_A_table():
    failures = []

    def run():
        for m in range(2, 7):
            ctx = DihedralContext(m, load_expected("dihedral_A"), ["s", "t", "sts"])
            rep = Report()
            _check_common(ctx, f"A[m={m}]", rep)
            failures.extend(r.identity_id for r in rep.failures()
                            if ".mult[" in r.identity_id or ".closed" in r.identity_id)
            # the square d_t^2 against the closed formula, with explicit integer coefficients
            d = ctx.d_vector
            z = (m - 1) * (d("1") + d("d_A") + d("d_s") + d("d_sbar")) + (m - 2) * (d("d_t") + d("d_tbar"))
            if not np.array_equal(convolve_dense(ctx.g, d("d_t"), d("d_t")), z):
                failures.append(f"m={m}: d_t^2 != z_A")
    _, dt = timed(run)
    assert report(2, not failures, dt, f"m=2..6, 36 products each; mismatches: {failures or 'none'}")


A_PROPOSITION_ITEMS = (".rank", ".sigma_equals_D", ".theta_morphism", ".kernel_rank", ".kernel_generator",
                       ".kernel_equals_sigma1", ".radical_dim", ".radical_is_kernel", ".kernel_square_zero",
                       ".theta_surjective")


def test_criterion_03_dihedral_A_proposition():
    bad, seen = [], set()

    def run():
        for m in range(2, 9):
            for r in verify_A_tables(m).results:
                if r.identity_id.startswith("A[") and r.identity_id.endswith(A_PROPOSITION_ITEMS):
                    seen.add(r.identity_id.split("]")[1])
                    if not r.status:
                        bad.append(r.identity_id)
    _, dt = timed(run)
    ok = not bad and len(seen) == len(A_PROPOSITION_ITEMS)
    assert report(3, ok, dt, f"m=2..8, items checked {sorted(seen)}; failures: {bad or 'none'}")


def test_criterion_04_B_rank_table():
    expected = {2: (6, 6), 3: (8, 8), 4: (10, 10), 5: (12, 10), 6: (14, 14), 7: (16, 12), 8: (18, 18),
                9: (20, 18), 10: (22, 22), 11: (24, 16)}
    got = {}

    def run():
        for m in expected:
            g = group(f"I2_{2 * m}")
            B = theorem_family(g, ["s"], ["t"])
            T = admissible_sets(g, B)
            got[m] = (descent_algebra(g, B, T).rank, sigma_module(g, B, table=T, check_closed=False).rank)
    _, dt = timed(run)
    ok = got == expected
    also = all(verify_B_tables(m).ok for m in range(2, 12))
    assert report(4, ok and also, dt, f"ranks {got}; per-m B-table identities ok={also}")


def test_criterion_05_g2():
    rep, dt = timed(section_g2)
    wit = [r for r in rep.results if r.identity_id in ("G2.B.theta(d_1^2)(w0)", "G2.B.theta(d_1)^2(w0)")]
    assert report(5, rep.ok, dt, f"{len(rep.results)} identities; failures: "
                                 f"{[r.identity_id for r in rep.failures()] or 'none'}; "
                                 f"non-morphism witness at w0: {[str(r.lhs) for r in wit]}")


def test_criterion_06_idempotents():
    bad = []

    def run():
        for m in range(2, 7):
            bad.extend((r.identity_id, r.lhs, r.rhs) for r in verify_idempotents(m).failures())
    _, dt = timed(run)
    ids = [b[0] for b in bad]
    assert report(6, not bad, dt, f"m=2..6; failures: {ids or 'none'}"), bad


def _closed_algebras():
    """(name, g, A) for every closed D_A met in criteria 1-7."""
    out = []
    g = group("F4")
    out.append(("F4", g, theorem_family(g, ["s1", "s2", "s3", "s4"], ["s1"])))
    for m in range(2, 12):
        g = group(f"I2_{2 * m}")
        out.append((f"I2_{2 * m}:B", g, theorem_family(g, ["s"], ["t"])))
        if m <= 8:
            out.append((f"I2_{2 * m}:A", g, reflection_set(g, "s,t,sts")))
    for name in PROPERTY_TYPES:
        g = group(name)
        out.extend((name, g, A) for A in family_sets(g))
    return out


def test_criterion_07_property_suite():
    rep, dt = timed(lambda: [family_suite(name) for name in PROPERTY_TYPES])
    bad = [r.identity_id for x in rep for r in x.failures()]
    total = sum(len(x.results) for x in rep)
    assert report(7, not bad, dt, f"{total} checks over {len(PROPERTY_TYPES)} types; failures: {bad or 'none'}")


def test_criterion_08_counting_oracle():
    bad, count = [], [0]

    def run():
        for name, g, A in _closed_algebras():
            T = admissible_sets(g, A)
            D = descent_algebra(g, A, T, oracle=False)
            if not D.closed:
                continue
            count[0] += 1
            if not np.array_equal(counting_constants(g, T), D.structure_constants):
                bad.append(name)
    _, dt = timed(run)
    assert report(8, not bad and count[0] > 0, dt, f"{count[0]} closed algebras compared; mismatches: {bad or 'none'}")


def test_criterion_09_infinite_dihedral():
    res, dt = timed(lambda: [infinite_nice_check(A, 50) for A in (["s", "t", "sts"], ["t", "sts"])])
    ok = all(r.ok for r in res)
    assert report(9, ok, dt, "; ".join(f"{{{','.join(r.A)}}}: {r.checked} checks, {len(r.violations)} violations"
                                      for r in res))


def test_criterion_10_search_nice():
    def run():
        out = {}
        for name in ("A2", "B2"):
            g = group(name)
            first = [r.to_json() for r in search_nice(g)]
            second = [r.to_json() for r in search_nice(g, jobs=2)]
            theorem = theorem_form_sets(g)
            out[name] = (first == second, all(r["nice"] for r in first if r["theorem_form"]),
                         sum(r["theorem_form"] for r in first), len(theorem))
        return out
    res, dt = timed(run)
    ok = all(same and nice and n == k for same, nice, n, k in res.values())
    assert report(10, ok, dt, f"{{type: (deterministic, theorem-form all nice, #theorem-form rows, #sets)}} = {res}")
