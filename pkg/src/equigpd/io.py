"""Canonical JSON documents for groupoids, functors and reports.

Serialization sorts keys and every array, so equal values give identical
bytes.  Parsing checks only the shape of the document; mathematical laws
are left to :func:`equigpd.core.validate`.
"""
from __future__ import annotations

import json
import os
from typing import Any, Optional

from .core import (
    EquivariantFunctor,
    FiniteGroupoid,
    Functor,
    InvolutiveGroupoid,
)

VERSION = "1"


class ParseError(ValueError):
    """Malformed input; ``line`` and ``column`` are set for JSON syntax errors."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 path: str = ""):
        self.message, self.line, self.column, self.path = message, line, column, path
        where = f" at line {line}, column {column}" if line is not None else ""
        at = f" ({path})" if path else ""
        super().__init__(f"{message}{where}{at}")


def _dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def _expect(cond: bool, message: str, path: str):
    if not cond:
        raise ParseError(message, path=path)


def _str_map(v, path) -> dict:
    _expect(isinstance(v, dict), "expected an object", path)
    for k, x in v.items():
        _expect(isinstance(x, str), "expected a string value", f"{path}.{k}")
    return dict(v)


# ----------------------------------------------------------------------
# groupoids
# ----------------------------------------------------------------------
def groupoid_to_doc(G) -> dict:
    carrier = G.carrier if isinstance(G, InvolutiveGroupoid) else G
    rows = []
    for (g, f), h in carrier.compose_table.items():
        # unit-law rows are implied and left out
        if (carrier.identity.get(carrier.morphisms[g][0]) == g and h == f) or (
            carrier.identity.get(carrier.morphisms[f][1]) == f and h == g
        ):
            continue
        rows.append([g, f, h])
    doc = {
        "version": VERSION,
        "kind": "groupoid",
        "objects": sorted(carrier.objects),
        "morphisms": [{"id": m, "src": s, "dst": d} for m, (s, d) in sorted(carrier.morphisms.items())],
        "identity": dict(sorted(carrier.identity.items())),
        "inverse": dict(sorted(carrier.inverse.items())),
        "compose": sorted(rows),
    }
    if isinstance(G, InvolutiveGroupoid):
        doc["involution"] = {"objects": dict(G.invol_obj), "morphisms": dict(G.invol_mor)}
    return doc


def serialize_groupoid(G) -> str:
    return _dumps(groupoid_to_doc(G))


def groupoid_from_doc(doc: Any, path: str = "$") -> InvolutiveGroupoid:
    """Without an ``involution`` entry the involution is the identity."""
    _expect(isinstance(doc, dict), "expected an object", path)
    _expect(doc.get("kind", "groupoid") == "groupoid", "kind must be 'groupoid'", f"{path}.kind")
    for key in ("objects", "morphisms", "identity", "inverse", "compose"):
        _expect(key in doc, f"missing key '{key}'", path)
    objects = doc["objects"]
    _expect(isinstance(objects, list) and all(isinstance(x, str) for x in objects),
            "expected a list of strings", f"{path}.objects")
    _expect(isinstance(doc["morphisms"], list), "expected a list", f"{path}.morphisms")
    mors = {}
    for k, row in enumerate(doc["morphisms"]):
        p = f"{path}.morphisms[{k}]"
        _expect(isinstance(row, dict) and {"id", "src", "dst"} <= set(row), "expected {id, src, dst}", p)
        _expect(all(isinstance(row[c], str) for c in ("id", "src", "dst")), "expected strings", p)
        _expect(row["id"] not in mors, f"duplicate morphism id '{row['id']}'", p)
        mors[row["id"]] = (row["src"], row["dst"])
    identity = _str_map(doc["identity"], f"{path}.identity")
    inverse = _str_map(doc["inverse"], f"{path}.inverse")
    _expect(isinstance(doc["compose"], list), "expected a list", f"{path}.compose")
    comp = {}
    for k, row in enumerate(doc["compose"]):
        p = f"{path}.compose[{k}]"
        _expect(isinstance(row, list) and len(row) == 3 and all(isinstance(c, str) for c in row),
                "expected [g, f, gf]", p)
        comp[row[0], row[1]] = row[2]
    # complete the unit-law rows that were omitted
    for m, (s, d) in mors.items():
        if d in identity:
            comp.setdefault((identity[d], m), m)
        if s in identity:
            comp.setdefault((m, identity[s]), m)
    carrier = FiniteGroupoid(objects, mors, identity, inverse, comp)
    inv = doc.get("involution")
    if inv is None:
        return InvolutiveGroupoid(carrier, {x: x for x in objects}, {m: m for m in mors})
    p = f"{path}.involution"
    _expect(isinstance(inv, dict) and {"objects", "morphisms"} <= set(inv), "expected {objects, morphisms}", p)
    return InvolutiveGroupoid(carrier, _str_map(inv["objects"], f"{p}.objects"),
                              _str_map(inv["morphisms"], f"{p}.morphisms"))


def parse_groupoid(text: str) -> InvolutiveGroupoid:
    return groupoid_from_doc(_loads(text))


# ----------------------------------------------------------------------
# functors
# ----------------------------------------------------------------------
def functor_to_doc(F: Functor) -> dict:
    return {
        "version": VERSION,
        "kind": "functor",
        "dom": groupoid_to_doc(F.dom),
        "cod": groupoid_to_doc(F.cod),
        "on_obj": dict(F.on_obj),
        "on_mor": dict(F.on_mor),
    }


def serialize_functor(F: Functor) -> str:
    return _dumps(functor_to_doc(F))


def _side(doc, key, base_dir, path):
    v = doc.get(key)
    _expect(v is not None, f"missing key '{key}'", path)
    if isinstance(v, str):
        # a file reference, relative to the referring document
        ref = v if os.path.isabs(v) or base_dir is None else os.path.join(base_dir, v)
        try:
            with open(ref, encoding="utf-8") as fh:
                return groupoid_from_doc(_loads(fh.read()), f"{path}.{key}")
        except OSError as e:
            raise ParseError(f"cannot read '{v}': {e.strerror}", path=f"{path}.{key}") from None
    return groupoid_from_doc(v, f"{path}.{key}")


def functor_from_doc(doc: Any, base_dir: Optional[str] = None, path: str = "$") -> EquivariantFunctor:
    _expect(isinstance(doc, dict), "expected an object", path)
    _expect(doc.get("kind") == "functor", "kind must be 'functor'", f"{path}.kind")
    A = _side(doc, "dom", base_dir, path)
    B = _side(doc, "cod", base_dir, path)
    for key in ("on_obj", "on_mor"):
        _expect(key in doc, f"missing key '{key}'", path)
    return EquivariantFunctor(A, B, _str_map(doc["on_obj"], f"{path}.on_obj"),
                              _str_map(doc["on_mor"], f"{path}.on_mor"))


def parse_functor(text: str, base_dir: Optional[str] = None) -> EquivariantFunctor:
    return functor_from_doc(_loads(text), base_dir)


# ----------------------------------------------------------------------
# generic documents and reports
# ----------------------------------------------------------------------
def parse_document(text: str, base_dir: Optional[str] = None):
    doc = _loads(text)
    _expect(isinstance(doc, dict), "expected an object", "$")
    kind = doc.get("kind")
    if kind == "groupoid":
        return groupoid_from_doc(doc)
    if kind == "functor":
        return functor_from_doc(doc, base_dir)
    if kind == "report":
        return doc
    raise ParseError(f"unknown kind {kind!r}", path="$.kind")


def load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read '{path}': {e.strerror}") from None
    return parse_document(text, os.path.dirname(os.path.abspath(path)))


def report_doc(command: str, verdict: Optional[bool], **fields) -> dict:
    return {"version": VERSION, "kind": "report", "command": command, "verdict": verdict, **fields}


def serialize_report(doc: dict) -> str:
    return _dumps(doc)
