"""JSON (de)serialization for families, braids, pro-groups and stage morphisms.

Complex numbers are [re, im] pairs and words are signed-integer arrays.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

import jsonschema
import numpy as np

from .braid import BraidWord
from .errors import ParseError, SchemaError
from .family import Edge, Graph1Complex, PolyFamily, ScalarLoopSamples
from .freegrp import FreeHom, FreeWord
from .permgroup import Permutation
from .progroup import PeriodicTail, ProFreeGroup, StageMorphism, Target

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_WORD = {"type": "array", "items": {"type": "integer", "not": {"const": 0}}}
_ID = {"type": "string", "minLength": 1}

SCHEMAS: dict[str, dict[str, Any]] = {
    "family": {
        "type": "object",
        "required": ["degree", "vertices", "edges", "basepoint"],
        "properties": {
            "degree": {"type": "integer", "minimum": 1},
            "vertices": {"type": "array", "items": _ID, "minItems": 1},
            "basepoint": _ID,
            "edges": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["id", "ends", "samples"],
                    "properties": {
                        "id": _ID,
                        "ends": {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2},
                        "samples": {
                            "type": "array",
                            "minItems": 2,
                            "items": {"type": "array", "items": _COMPLEX},
                        },
                    },
                },
            },
        },
    },
    "braid": {
        "type": "object",
        "required": ["strands", "word"],
        "properties": {"strands": {"type": "integer", "minimum": 1}, "word": _WORD},
    },
    "profree": {
        "type": "object",
        "required": ["ranks", "bondings"],
        "properties": {
            "ranks": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            "bondings": {"type": "array", "items": {"type": "array", "items": _WORD}},
            "extension": {
                "oneOf": [
                    {"type": "null"},
                    {"type": "object", "required": ["period"], "properties": {"period": {"type": "integer", "minimum": 1}}},
                ]
            },
            "meta": {"type": "object"},
        },
    },
    "morphism": {
        "type": "object",
        "required": ["stage", "target", "images"],
        "properties": {
            "stage": {"type": "integer", "minimum": 1},
            "target": {
                "type": "object",
                "required": ["kind", "size"],
                "properties": {"kind": {"enum": ["braid", "integers", "perm"]}, "size": {"type": "integer", "minimum": 1}},
            },
            "images": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        },
    },
    "scalar_loop": {
        "type": "object",
        "required": ["values"],
        "properties": {"values": {"type": "array", "items": _COMPLEX, "minItems": 2}},
    },
}


def validate(doc: Any, kind: str) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{kind}: {exc.message} at {path}") from None


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _z(pair: list[float]) -> complex:
    return complex(pair[0], pair[1])


# families


def family_to_json(F: PolyFamily) -> dict[str, Any]:
    return {
        "degree": F.degree,
        "vertices": list(F.graph.vertices),
        "basepoint": F.graph.basepoint,
        "edges": [
            {"id": e.id, "ends": list(e.ends), "samples": [[_c(z) for z in row] for row in F.samples[e.id]]}
            for e in F.graph.edges
        ],
    }


def family_from_json(doc: dict[str, Any]) -> PolyFamily:
    validate(doc, "family")
    n = doc["degree"]
    edges, samples = [], {}
    for e in doc["edges"]:
        rows = e["samples"]
        if any(len(r) != n for r in rows):
            raise SchemaError(f"edge {e['id']}: every sample needs {n} coefficients")
        edges.append(Edge(e["id"], tuple(e["ends"]), len(rows) - 1))
        samples[e["id"]] = np.array([[_z(p) for p in r] for r in rows], dtype=complex)
    graph = Graph1Complex(tuple(doc["vertices"]), tuple(edges), doc["basepoint"])
    return PolyFamily(graph, n, samples)


# braids and scalar loops


def braid_to_json(b: BraidWord) -> dict[str, Any]:
    return {"strands": b.strands, "word": list(b.letters)}


def braid_from_json(doc: dict[str, Any]) -> BraidWord:
    validate(doc, "braid")
    if any(abs(s) >= doc["strands"] for s in doc["word"]):
        raise SchemaError("braid letter out of range for the strand count")
    return BraidWord(doc["strands"], tuple(doc["word"]))


def scalar_loop_to_json(f: ScalarLoopSamples) -> dict[str, Any]:
    return {"values": [_c(z) for z in f.values]}


def scalar_loop_from_json(doc: dict[str, Any]) -> ScalarLoopSamples:
    validate(doc, "scalar_loop")
    try:
        return ScalarLoopSamples(tuple(_z(p) for p in doc["values"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# pro-groups and morphisms


def profree_to_json(P: ProFreeGroup) -> dict[str, Any]:
    return {
        "ranks": list(P.ranks),
        "bondings": [[list(w.letters) for w in h.images] for h in P.bondings],
        "extension": None if P.extension is None else {"period": P.extension.period},
        "meta": P.meta,
    }


def profree_from_json(doc: dict[str, Any]) -> ProFreeGroup:
    validate(doc, "profree")
    ranks = tuple(doc["ranks"])
    if len(doc["bondings"]) != len(ranks) - 1:
        raise SchemaError(f"{len(ranks)} stages need {len(ranks) - 1} bondings")
    bondings = []
    for j, images in enumerate(doc["bondings"], start=1):
        cod, dom = ranks[j - 1], ranks[j]
        if len(images) != dom:
            raise SchemaError(f"bonding {j} needs {dom} generator images")
        if any(abs(s) > cod for w in images for s in w):
            raise SchemaError(f"bonding {j} uses a letter beyond rank {cod}")
        bondings.append(FreeHom(dom, cod, tuple(FreeWord(cod, tuple(w)) for w in images)))
    ext = doc.get("extension")
    return ProFreeGroup(ranks, tuple(bondings), PeriodicTail(ext["period"]) if ext else None, dict(doc.get("meta", {})))


def morphism_to_json(phi: StageMorphism) -> dict[str, Any]:
    kind = phi.target.kind
    if kind == "braid":
        images = [list(b.letters) for b in phi.images]
    elif kind == "perm":
        images = [list(p.images) for p in phi.images]
    else:
        images = [list(v) for v in phi.images]
    return {"stage": phi.stage, "target": {"kind": kind, "size": phi.target.size}, "images": images}


def morphism_from_json(doc: dict[str, Any]) -> StageMorphism:
    validate(doc, "morphism")
    kind, size = doc["target"]["kind"], doc["target"]["size"]
    try:
        if kind == "braid":
            images = tuple(BraidWord(size, tuple(w)) for w in doc["images"])
        elif kind == "perm":
            images = tuple(Permutation(tuple(w)) for w in doc["images"])
        else:
            images = tuple(tuple(w) for w in doc["images"])
        return StageMorphism(doc["stage"], Target(kind, size), images)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


READERS: dict[str, Callable[[dict[str, Any]], Any]] = {
    "family": family_from_json,
    "braid": braid_from_json,
    "profree": profree_from_json,
    "morphism": morphism_from_json,
    "scalar_loop": scalar_loop_from_json,
}


def parse_text(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def load(path: str | Path, kind: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return READERS[kind](parse_text(text))


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str | Path, data: str | bytes) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
