"""JSON documents for templates and loop programs.

Layout::

    {"vertices":  [{"id": "v", "kind": "read"}, {"id": "A", "kind": "input", "dims": 1, "sizes": [4]}],
     "edges":     [{"src": "A", "dst": "v", "weight": "1", "rank": 0,
                    "sibling": {"type": "cyclic_shift", "delta": 1}}],
     "templates": {"id": "T0", "parameter": "1", "vertices": ["A"], "children": [...]}}

Weights and parameters are decimal strings so that huge values survive any
JSON reader; ``"inf"`` is the infinite weight.  Serialization sorts keys,
vertices, edges and children, so parse followed by serialize is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import TemplateError
from .loops.program import Kind, LoopProgram
from .template import CyclicShift, Edge, ParametricGraphTemplate, Permutation, TemplateNode
from .weights import format_weight, parse_weight


class DocumentError(TemplateError, ValueError):
    """The text is not a well-formed template document."""


@dataclass(frozen=True)
class Document:
    pgt: ParametricGraphTemplate
    kinds: Optional[dict] = None  # set when any vertex carries a kind

    @property
    def program(self) -> LoopProgram:
        if self.kinds is None:
            raise DocumentError("document has no vertex kinds, so it is not a loop program")
        return LoopProgram(self.pgt, self.kinds)


def _need(obj, key, types, where):
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in obj:
        raise DocumentError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, types) or isinstance(val, bool):
        raise DocumentError(f"{where}: field {key!r} has the wrong type")
    return val


def _parameter(text, where) -> int:
    if not isinstance(text, str) or not text.isdigit():
        raise DocumentError(f"{where}: parameter must be a decimal string, got {text!r}")
    return int(text)


def _sibling(obj, where):
    kind = _need(obj, "type", str, where)
    if kind == "cyclic_shift":
        return CyclicShift(_need(obj, "delta", int, where))
    if kind == "permutation":
        table = _need(obj, "map", list, where)
        if any(not isinstance(x, int) or isinstance(x, bool) for x in table):
            raise DocumentError(f"{where}: permutation entries must be integers")
        return Permutation(tuple(table))
    raise DocumentError(f"{where}: unknown sibling type {kind!r}")


def _template(obj, where) -> TemplateNode:
    tid = _need(obj, "id", str, where)
    where = f"template {tid!r}"
    param = _parameter(_need(obj, "parameter", str, where), where)
    verts = _need(obj, "vertices", list, where)
    if any(not isinstance(v, str) for v in verts):
        raise DocumentError(f"{where}: vertex ids must be strings")
    kids = [_template(c, where) for c in _need(obj, "children", list, where)]
    return TemplateNode(tid, param, verts, kids)


def from_dict(data) -> Document:
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    extra = set(data) - {"vertices", "edges", "templates"}
    if extra:
        raise DocumentError(f"unknown top-level fields {sorted(extra)}")
    vertices, dummies, kinds = [], [], {}
    for i, item in enumerate(_need(data, "vertices", list, "document")):
        vid = _need(item, "id", str, f"vertex #{i}")
        vertices.append(vid)
        if "kind" not in item:
            continue
        text = _need(item, "kind", str, f"vertex {vid!r}")
        if text == "dummy":
            dummies.append(vid)
            continue
        sizes = item.get("sizes", [])
        if not isinstance(sizes, list) or any(not isinstance(s, int) or isinstance(s, bool) for s in sizes):
            raise DocumentError(f"vertex {vid!r}: sizes must be a list of integers")
        if "dims" in item and item["dims"] != len(sizes):
            raise DocumentError(f"vertex {vid!r}: dims {item['dims']!r} disagrees with sizes")
        try:
            kinds[vid] = Kind.parse(text, sizes)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"vertex {vid!r}: {exc}") from None

    edges = []
    for i, item in enumerate(_need(data, "edges", list, "document")):
        where = f"edge #{i}"
        src = _need(item, "src", str, where)
        dst = _need(item, "dst", str, where)
        try:
            weight = parse_weight(_need(item, "weight", str, where))
        except ValueError as exc:
            raise DocumentError(f"{where}: {exc}") from None
        rank = item.get("rank")
        if rank is not None and (not isinstance(rank, int) or isinstance(rank, bool)):
            raise DocumentError(f"{where}: rank must be an integer")
        sib = _sibling(item["sibling"], where) if item.get("sibling") is not None else None
        edges.append(Edge(src, dst, weight, sib, rank))

    root = _template(_need(data, "templates", dict, "document"), "templates")
    pgt = ParametricGraphTemplate(vertices, edges, root, dummies)
    return Document(pgt, kinds or None)


def parse(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None
    return from_dict(data)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _sort_key(item: dict) -> str:
    return json.dumps(item, sort_keys=True)


def to_dict(obj, kinds: Optional[dict] = None) -> dict:
    """Accepts a template, a :class:`LoopProgram` or a :class:`Document`."""
    if isinstance(obj, LoopProgram):
        obj, kinds = obj.pgt, obj.kinds
    elif isinstance(obj, Document):
        obj, kinds = obj.pgt, obj.kinds
    pgt: ParametricGraphTemplate = obj
    kinds = kinds or {}

    vertices = []
    for v in sorted(pgt.vertices):
        item = {"id": v}
        if v in pgt.dummies:
            item["kind"] = "dummy"
        elif v in kinds:
            k = kinds[v]
            item["kind"] = str(k)
            if k.is_memory:
                item["dims"] = k.dims
                item["sizes"] = list(k.sizes)
        vertices.append(item)

    edges = []
    for e in pgt.edges:
        item = {"src": e.src, "dst": e.dst, "weight": format_weight(e.weight)}
        if e.rank is not None:
            item["rank"] = e.rank
        if isinstance(e.sibling, CyclicShift):
            item["sibling"] = {"type": "cyclic_shift", "delta": e.sibling.delta}
        elif isinstance(e.sibling, Permutation):
            item["sibling"] = {"type": "permutation", "map": list(e.sibling.map)}
        edges.append(item)
    edges.sort(key=lambda item: (item["src"], item["dst"], _sort_key(item)))

    def node(t: TemplateNode) -> dict:
        return {
            "id": t.id,
            "parameter": str(t.parameter),
            "vertices": sorted(t.vertices),
            "children": [node(c) for c in sorted(t.children, key=lambda c: c.id)],
        }

    return {"vertices": vertices, "edges": edges, "templates": node(pgt.root)}


def serialize(obj, kinds: Optional[dict] = None) -> str:
    return json.dumps(to_dict(obj, kinds), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save(obj, path, kinds: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(obj, kinds))
