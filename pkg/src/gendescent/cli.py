"""Command-line interface: ``gendescent {info,descent,algebra,verify,search-nice}``.

Exit codes: 0 success, 1 a verification identity failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .algebra import BudgetError, DEFAULT_GENERATOR_BUDGET, descent_algebra, sigma_module
from .characters import theta_map
from .coxeter import CoxeterGroup, CoxeterMatrix, load_or_build, named_type
from .descent import (ReflectionSet, admissible_sets, all_reflections, is_left_connected, is_nice,
                      reflection_set, simple_reflections, theorem_family)
from .export import export_csv, export_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    type: Optional[str] = None
    matrix: Optional[str] = None
    A: Optional[str] = None
    family: list = field(default_factory=list)
    format: str = "table"
    cache_dir: Optional[str] = None
    verbose: int = 0
    length_bound: int = 50
    budget: int = DEFAULT_GENERATOR_BUDGET
    jobs: int = 1


# ------------------------------------------------------------------ parsing helpers


def load_group(cfg: RunConfig) -> CoxeterGroup:
    if bool(cfg.type) == bool(cfg.matrix):
        raise UsageError("give exactly one of --type and --matrix")
    try:
        if cfg.type:
            matrix = named_type(cfg.type)
        else:
            text = cfg.matrix
            if Path(text).is_file():
                text = Path(text).read_text()
            data = json.loads(text)
            matrix = CoxeterMatrix.from_json(data) if isinstance(data, dict) else CoxeterMatrix.from_rows(data)
        if not matrix.is_finite_bonded():
            raise UsageError("infinite bonds are only supported by `verify --only infinite`")
        return load_or_build(matrix, cfg.cache_dir)
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(str(exc)) from exc


def parse_family(g: CoxeterGroup, items: Sequence[str]) -> ReflectionSet:
    parts = {"S1": [], "S2": []}
    for item in items:
        key, _, value = item.partition("=")
        key = key.strip().upper()
        if key not in parts or not _:
            raise UsageError(f"family items look like S1=s1,s2 or S2=s1 (got {item!r})")
        value = value.strip()
        if value.upper() == "ALL":
            names = list(g.labels)
        elif value.upper() in ("", "NONE"):
            names = []
        else:
            names = [v.strip() for v in value.split(",") if v.strip()]
        unknown = [v for v in names if v not in g.labels]
        if unknown:
            raise UsageError(f"unknown generator(s) {unknown}; generators are {list(g.labels)}")
        parts[key] = names
    return theorem_family(g, parts["S1"], parts["S2"])


def parse_A(g: CoxeterGroup, cfg: RunConfig, default: str = "S") -> ReflectionSet:
    if cfg.family:
        if cfg.A:
            raise UsageError("give at most one of --A and --family")
        return parse_family(g, cfg.family)
    spec = (cfg.A or default).strip()
    key = spec.upper()
    if key == "S":
        return simple_reflections(g)
    if key in ("T", "ALL"):
        return all_reflections(g)
    if key in ("EMPTY", "NONE", "{}"):
        return ReflectionSet(g, frozenset())
    if spec == "B":
        if g.rank != 2:
            raise UsageError("preset B = {s} u C(t) needs a rank-2 group")
        return theorem_family(g, [0], [1])
    try:
        return reflection_set(g, spec)
    except ValueError as exc:
        raise UsageError(f"bad reflection list {spec!r}: {exc}") from exc


def _set_label(g: CoxeterGroup, I) -> str:
    return "{" + ",".join(g.refl_label(r) for r in sorted(I)) + "}"


def emit(rows: list[dict], fmt: str, out=None, title: str = "") -> None:
    out = out or sys.stdout
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r[c]) for c in cols])
        return
    if title:
        out.write(title + "\n")
    widths = [max(len(c), *(len(_cell(r[c])) for r in rows)) for c in cols]
    out.write("  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(_cell(r[c]).ljust(wd) for c, wd in zip(cols, widths)).rstrip() + "\n")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return ",".join(map(str, v))
    return str(v)


# ------------------------------------------------------------------ commands


def cmd_info(cfg: RunConfig) -> int:
    g = load_group(cfg)
    info = {
        "type": cfg.type or "custom",
        "rank": g.rank,
        "generators": list(g.labels),
        "order": g.order,
        "reflections": g.nrefl,
        "reflection_classes": [[g.refl_label(r) for r in sorted(c)] for c in g.refl_classes],
        "components": len(g.direct_product_split()),
        "w0": g.word_label(g.w0),
        "w0_length": int(g.lengths[g.w0]),
        "field_N": g.field.N,
    }
    if cfg.format == "json":
        emit(info, "json")  # type: ignore[arg-type]
    else:
        emit([{"key": k, "value": v if not isinstance(v, list) or not v or not isinstance(v[0], list)
               else " | ".join(",".join(c) for c in v)} for k, v in info.items()], cfg.format)
    return EXIT_OK


def cmd_descent(cfg: RunConfig) -> int:
    g = load_group(cfg)
    A = parse_A(g, cfg)
    table = admissible_sets(g, A)
    nice = is_nice(g, A, table)
    D = descent_algebra(g, A, table)
    rows = [{"I": table.label(i), "size": len(c), "z_I": g.word_label(table.reps[i]),
             "left_connected": is_left_connected(g, c)} for i, c in enumerate(table.classes)]
    summary = {
        "A": A.labels(),
        "admissible": len(table),
        "nice": nice.nice,
        "nice_witness": None if nice.nice else {"r": g.refl_label(nice.witness[0]),
                                                  "w": g.word_label(nice.witness[1])},
        "closed": D.closed,
        "rank": D.rank,
        "has_unit": D.has_unit,
        "contains_S": A.contains_S,
    }
    if cfg.format == "json":
        emit({"summary": summary, "classes": rows}, "json")  # type: ignore[arg-type]
        return EXIT_OK
    emit(rows, cfg.format, title=f"A = {_set_label(g, A.members)}  ({len(A)} reflections)")
    if cfg.format == "table":
        for k, v in summary.items():
            if k != "A":
                print(f"{k}: {_cell(v) if not isinstance(v, dict) else v}")
    return EXIT_OK


def _lincomb(labels, row) -> str:
    terms = []
    for k, c in enumerate(row):
        c = int(c)
        if c:
            terms.append(labels[k] if c == 1 else f"{c}*{labels[k]}")
    return " + ".join(terms) or "0"


def cmd_algebra(cfg: RunConfig, output: Optional[str] = None) -> int:
    g = load_group(cfg)
    A = parse_A(g, cfg)
    table = admissible_sets(g, A)
    D = descent_algebra(g, A, table)
    sigma_report: dict
    try:
        sig = sigma_module(g, A, budget=cfg.budget, table=table)
        sigma_report = {"rank": sig.rank, "closed": sig.closed, "x_basis": sig.info["x_basis"],
                        "contained_in_D": sig.info["contained_in_D"], "generators": sig.info["num_generators"]}
        if sig.witness:
            sigma_report["witness"] = list(sig.witness)
        th = theta_map(g, A, sig)
        theta_report = {"status": th.status, "reason": th.reason, "kernel_rank": len(th.kernel)}
        if th.witness:
            i, j, w, lhs, rhs = th.witness
            theta_report["witness"] = {"x_I": i, "x_J": j, "w": g.word_label(w), "lhs": str(lhs), "rhs": str(rhs)}
    except BudgetError as exc:
        sigma_report = {"skipped": str(exc)}
        theta_report = {"skipped": str(exc)}
    extra = {"sigma": sigma_report, "theta": theta_report}
    if cfg.format == "json":
        text = json.dumps(export_json(g, A, D, extra), indent=1) + "\n"
    elif cfg.format == "csv":
        text = export_csv(D)
    else:
        buf = io.StringIO()
        buf.write(f"D_A: rank {D.rank}, closed {_cell(D.closed)}, unital {_cell(D.has_unit)}\n")
        if D.closed and len(D.labels) <= 40:
            c = D.structure_constants
            for i, a in enumerate(D.labels):
                for j, b in enumerate(D.labels):
                    buf.write(f"  {a} * {b} = {_lincomb(D.labels, c[i, j])}\n")
        elif not D.closed:
            I, J, w, z = D.witness
            buf.write(f"  not closed: d_{D.labels[I]} * d_{D.labels[J]} differs at {g.word_label(w)} "
                      f"and {g.word_label(z)}\n")
        buf.write(f"Sigma_A: {json.dumps(sigma_report)}\n")
        buf.write(f"theta: {json.dumps(theta_report)}\n")
        text = buf.getvalue()
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, only: Sequence[str], report_path: Optional[str] = None) -> int:
    from .verify import SECTIONS, run_suite

    unknown = [s for s in only if s not in SECTIONS]
    if unknown:
        raise UsageError(f"unknown section(s) {unknown}; choose from {list(SECTIONS)}")

    def progress(name, rep, dt):
        if cfg.format == "table":
            bad = rep.failures()
            print(f"[{'PASS' if not bad else 'FAIL'}] {name}: {len(rep.results) - len(bad)}/{len(rep.results)} "
                  f"identities ({dt:.1f} s)")
            for r in bad:
                print(f"    FAIL {r.identity_id}: lhs={_short(r.lhs)} rhs={_short(r.rhs)}")
            sys.stdout.flush()

    reports = run_suite(only or None, progress)
    doc = {name: rep.to_json() for name, rep in reports.items()}
    if report_path:
        Path(report_path).write_text(json.dumps(doc, indent=1))
    if cfg.format == "json":
        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")
    elif cfg.format == "csv":
        rows = [{"section": n, **r} for n, rs in doc.items() for r in rs]
        emit([{k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()} for r in rows], "csv")
    ok = all(rep.ok for rep in reports.values())
    if cfg.format == "table":
        print("all identities pass" if ok else "some identities FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def _short(x, n=100) -> str:
    s = json.dumps(x, default=str) if not isinstance(x, str) else x
    return s if len(s) <= n else s[: n - 3] + "..."


def cmd_search(cfg: RunConfig, contains_S: bool, max_reflections: int) -> int:
    from .search import SearchBudgetError, search_nice, summarize

    g = load_group(cfg)
    try:
        rows = search_nice(g, contains_S=contains_S, jobs=cfg.jobs, max_reflections=max_reflections)
    except SearchBudgetError as exc:
        raise UsageError(str(exc)) from exc
    data = [r.to_json() for r in rows]
    if cfg.format == "json":
        emit({"summary": summarize(rows), "rows": data}, "json")  # type: ignore[arg-type]
        return EXIT_OK
    table = []
    for r in rows:
        mark = "converse?" if r.converse_candidate else "question?" if r.question_candidate else ""
        table.append({"A": _set_label(g, ReflectionSet(g, frozenset(g.reflection_index(x) for x in r.A)).members),
                      "nice": r.nice, "closed": r.closed, "S<=A": r.contains_S,
                      "family_form": r.theorem_form, "rank": r.rank, "flag": mark})
    emit(table, cfg.format)
    if cfg.format == "table":
        print(json.dumps(summarize(rows)))
    return EXIT_OK


# ------------------------------------------------------------------ argparse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    grp = common.add_argument_group("group")
    grp.add_argument("--type", help="named Coxeter type, e.g. F4, G2, I2_8, B2xA1")
    grp.add_argument("--matrix", help="Coxeter matrix as JSON rows (or a path to such a file)")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--cache-dir", help="directory for cached group enumerations")
    common.add_argument("-v", "--verbose", action="count", default=0)

    aspec = argparse.ArgumentParser(add_help=False)
    aspec.add_argument("--A", dest="A", help="reflections (labels or root indices, comma separated) "
                                              "or a preset: S, T, B (rank 2: {s} u C(t)), EMPTY")
    aspec.add_argument("--family", nargs="+", default=[], metavar="S1=...|S2=...",
                       help="S1 together with the conjugacy classes of S2 (generator labels or ALL)")

    p = argparse.ArgumentParser(prog="gendescent", description="Generalized descent algebras of finite Coxeter groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="group summary")
    sub.add_parser("descent", parents=[common, aspec], help="admissible sets, classes and niceness")
    alg = sub.add_parser("algebra", parents=[common, aspec], help="structure constants, Sigma_A and theta")
    alg.add_argument("--budget", type=int, default=DEFAULT_GENERATOR_BUDGET, help="generator budget for Sigma_A")
    alg.add_argument("--output", "-o", help="write the export to a file")
    ver = sub.add_parser("verify", aliases=["verify-paper"], parents=[common], help="run the regression suite")
    ver.add_argument("--only", nargs="+", default=[], help="sections to run")
    ver.add_argument("--length-bound", type=int, default=50, help="word-length bound for the infinite dihedral check")
    ver.add_argument("--report", help="write the JSON report to this file")
    srch = sub.add_parser("search-nice", parents=[common], help="classify all subsets of T")
    srch.add_argument("--filter", choices=("all", "contains-S"), default="all")
    srch.add_argument("--jobs", type=int, default=1)
    srch.add_argument("--max-reflections", type=int, default=15, help="refuse searches over more than 2^N subsets")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(type=getattr(args, "type", None), matrix=getattr(args, "matrix", None),
                    A=getattr(args, "A", None), family=getattr(args, "family", []), format=args.format,
                    cache_dir=args.cache_dir, verbose=args.verbose,
                    length_bound=getattr(args, "length_bound", 50), budget=getattr(args, "budget", DEFAULT_GENERATOR_BUDGET),
                    jobs=getattr(args, "jobs", 1))
    t0 = time.perf_counter()
    try:
        if args.command == "info":
            code = cmd_info(cfg)
        elif args.command == "descent":
            code = cmd_descent(cfg)
        elif args.command == "algebra":
            code = cmd_algebra(cfg, args.output)
        elif args.command in ("verify", "verify-paper"):
            if cfg.length_bound != 50:
                from . import verify as _verify
                _verify.SECTIONS["infinite"] = lambda: _verify.section_infinite(cfg.length_bound)
            code = cmd_verify(cfg, args.only, args.report)
        else:
            code = cmd_search(cfg, args.filter == "contains-S", args.max_reflections)
    except UsageError as exc:
        print(f"gendescent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        sys.stderr.close()  # output was cut short by a closed pipe (e.g. `| head`)
        return EXIT_OK
    if cfg.verbose:
        print(f"({time.perf_counter() - t0:.2f} s)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
