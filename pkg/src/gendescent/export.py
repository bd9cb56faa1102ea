"""JSON / CSV export of structure constants, and re-validation of an export."""
from __future__ import annotations

import csv
import io
import json
from typing import Optional

import numpy as np

from .algebra import AlgebraPresentation, descent_algebra
from .coxeter import CoxeterGroup, CoxeterMatrix, build_group
from .descent import ReflectionSet, reflection_set

FORMAT = "gendescent.structure-constants"
VERSION = 1


def sparse_constants(pres: AlgebraPresentation) -> list[list[int]]:
    """Nonzero [I, J, K, c] entries in lexicographic order."""
    c = pres.structure_constants
    if c is None:
        return []
    return [[int(i), int(j), int(k), int(c[i, j, k])] for i, j, k in zip(*np.nonzero(c))]


def export_json(g: CoxeterGroup, A, pres: AlgebraPresentation, extra: Optional[dict] = None) -> dict:
    A = reflection_set(g, A)
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "matrix": g.matrix.to_json(),
        "order": g.order,
        "A": A.sorted(),
        "A_labels": A.labels(),
        "labels": list(pres.labels),
        "rank": pres.rank,
        "closed": pres.closed,
        "has_unit": pres.has_unit,
        "constants": sparse_constants(pres),
    }
    if not pres.closed and pres.witness is not None:
        doc["witness"] = [int(x) for x in pres.witness]
    if extra:
        doc.update(extra)
    return doc


def export_csv(pres: AlgebraPresentation) -> str:
    """Rows I,J,K,c with basis labels (RFC 4180 quoting)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["I", "J", "K", "c"])
    for i, j, k, c in sparse_constants(pres):
        w.writerow([pres.labels[i], pres.labels[j], pres.labels[k], c])
    return buf.getvalue()


def read_csv(text: str) -> list[tuple[str, str, str, int]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["I", "J", "K", "c"]:
        raise ValueError("not a structure-constant CSV")
    return [(a, b, k, int(c)) for a, b, k, c in rows[1:]]


def load_json(text_or_doc) -> dict:
    doc = json.loads(text_or_doc) if isinstance(text_or_doc, str) else text_or_doc
    if doc.get("format") != FORMAT:
        raise ValueError("not a structure-constant export")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported export version {doc.get('version')}")
    return doc


def revalidate(doc, group: Optional[CoxeterGroup] = None) -> tuple[bool, str]:
    """Rebuild the group and D_A(W) from an export and compare every recorded verdict and constant."""
    doc = load_json(doc)
    matrix = CoxeterMatrix.from_json(doc["matrix"])
    g = group if group is not None and group.matrix == matrix else build_group(matrix)
    if g.order != doc["order"]:
        return False, "group order differs"
    pres = descent_algebra(g, ReflectionSet(g, frozenset(doc["A"])))
    if list(pres.labels) != doc["labels"]:
        return False, "basis labels differ"
    if (pres.rank, pres.closed, pres.has_unit) != (doc["rank"], doc["closed"], doc["has_unit"]):
        return False, "verdicts differ"
    if sparse_constants(pres) != doc["constants"]:
        return False, "structure constants differ"
    return True, "ok"
