"""JSON documents for representations, and report helpers."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from typing import Any

from .exactla import Field, FieldError, Matrix, ParseError, field_from_descriptor
from .pencil import Pencil
from .quiver import AdhmDatum, AugmentedRep, FramedRep
from .stability import Subrep, Verdict

KINDS = ("framed_rep", "augmented_rep", "adhm", "kronecker")


class DocumentError(ValueError):
    """A document is malformed; the message names the offending field."""


# -- matrices --------------------------------------------------------------------------

def matrix_to_json(m: Matrix) -> list[list[str]]:
    return m.format_rows()


def matrix_from_json(F: Field, obj: Any, shape: tuple[int, int], name: str) -> Matrix:
    rows, cols = shape
    if not isinstance(obj, list) or len(obj) != rows:
        raise DocumentError(f"{name}: expected {rows} rows")
    data = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"{name}[{i}]: expected {cols} entries")
        try:
            data.append(tuple(F.parse(str(x)) for x in row))
        except (ParseError, FieldError, ValueError) as exc:
            raise DocumentError(f"{name}[{i}]: {exc}") from exc
    return Matrix(F, rows, cols, tuple(data))


def _matrix_list(F, doc, key, count, shape):
    obj = doc.get(key)
    if not isinstance(obj, list) or len(obj) != count:
        raise DocumentError(f"{key}: expected a list of {count} matrices")
    return tuple(matrix_from_json(F, m, shape, f"{key}[{i}]") for i, m in enumerate(obj))


# -- representations -------------------------------------------------------------------------

def rep_to_doc(rep) -> dict:
    F = rep.field if not isinstance(rep, Pencil) else rep.field
    doc: dict[str, Any] = {"field": F.descriptor()}
    if isinstance(rep, Pencil):
        doc.update(kind="kronecker", c=rep.c)
    else:
        doc.update(kind=rep.kind, n=rep.n, c=rep.c)
    doc["A1"] = matrix_to_json(rep.A1)
    doc["A2"] = matrix_to_json(rep.A2)
    if isinstance(rep, (FramedRep, AdhmDatum)):
        doc["C"] = [matrix_to_json(m) for m in rep.C]
    if isinstance(rep, AugmentedRep):
        doc["B"] = [matrix_to_json(m) for m in rep.B]
        doc["D"] = [matrix_to_json(m) for m in rep.D]
    if not isinstance(rep, Pencil):
        doc["e"] = matrix_to_json(rep.e)
    if isinstance(rep, (FramedRep, AugmentedRep)):
        doc["f"] = [matrix_to_json(m) for m in rep.f]
    return doc


def _int_field(doc, key, minimum):
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise DocumentError(f"{key}: expected an integer >= {minimum}")
    return v


def rep_from_doc(doc: Any):
    if not isinstance(doc, dict):
        raise DocumentError("document: expected an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"kind: expected one of {KINDS}")
    try:
        F = field_from_descriptor(doc.get("field"))
    except (FieldError, TypeError, ValueError) as exc:
        raise DocumentError(f"field: {exc}") from exc
    c = _int_field(doc, "c", 0)
    sq = (c, c)
    A1 = matrix_from_json(F, doc.get("A1"), sq, "A1")
    A2 = matrix_from_json(F, doc.get("A2"), sq, "A2")
    if kind == "kronecker":
        return Pencil(A1, A2)
    n = _int_field(doc, "n", 2 if kind == "augmented_rep" else 1)
    e = matrix_from_json(F, doc.get("e"), (1, c), "e")
    if kind == "adhm":
        return AdhmDatum(n, c, F, A1, A2, _matrix_list(F, doc, "C", n, sq), e)
    f = _matrix_list(F, doc, "f", n - 1, (c, 1))
    if kind == "framed_rep":
        return FramedRep(n, c, F, A1, A2, _matrix_list(F, doc, "C", n, sq), e, f)
    B = _matrix_list(F, doc, "B", n - 1, sq)
    D = _matrix_list(F, doc, "D", n - 1, sq)
    return AugmentedRep(n, c, F, A1, A2, B, D, e, f)


def dumps(obj: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_rep(path: str):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DocumentError(f"not a JSON document: {exc}") from exc
    return rep_from_doc(doc), digest(raw)


def digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- report pieces --------------------------------------------------------------------------

def subrep_to_json(sub: Subrep) -> dict:
    return {
        "dims": list(sub.dims),
        "S0": [list(map(sub.S0.field.format, col)) for col in sub.S0.columns()],
        "S1": [list(map(sub.S1.field.format, col)) for col in sub.S1.columns()],
    }


def verdict_to_json(v: Verdict) -> dict:
    out = {"tag": v.tag, "method": v.method}
    if v.stable is not None:
        out["stable"] = v.stable
    if v.witness is not None:
        out["witness"] = subrep_to_json(v.witness)
        out["violated"] = v.violated
    if v.notes:
        out["notes"] = list(v.notes)
    return out
