"""Materializing instantiations, plus the flat-graph utilities used as oracles.

Every concrete vertex keeps the template vertex it came from (its *origin*)
and its instance address, and its id is the canonical string
``origin@i0.i1...`` (bare ``origin`` for root vertices).  Parallel edges are
kept as separate edges so provenance survives.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional, Union

from .errors import InvalidTemplate, SizeLimitExceeded, UnknownVertex
from .template import DUMMY_PREFIX, Address, ParametricGraphTemplate, instantiation_size, validate
from .weights import INF, Weight, format_weight

DEFAULT_LIMIT = 1_000_000

# Incremented by every materialization; tests use it to prove that the
# template algorithms never instantiate.
stats: Counter = Counter()


def vertex_id(origin: str, address: Address) -> str:
    if not address:
        return origin
    return origin + "@" + ".".join(str(i) for i in address)


def parse_vertex_ref(text: str) -> tuple[str, Address]:
    """Inverse of :func:`vertex_id`: ``"v@1.0"`` -> ``("v", (1, 0))``."""
    origin, sep, rest = text.partition("@")
    if not sep:
        return origin, ()
    try:
        return origin, tuple(int(part) for part in rest.split("."))
    except ValueError:
        raise ValueError(f"malformed instance reference {text!r}") from None


@dataclass(frozen=True)
class ConcreteVertex:
    id: str
    origin: str
    address: Address


@dataclass(frozen=True)
class ConcreteEdge:
    src: str
    dst: str
    weight: Weight
    origin: Optional[int] = None  # index into the template's edge list


class ConcreteGraph:
    """A flat directed multigraph with provenance labels."""

    def __init__(self, vertices: Iterable[ConcreteVertex], edges: Iterable[ConcreteEdge]):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self._by_id = {v.id: v for v in self.vertices}

    def __repr__(self) -> str:
        return f"ConcreteGraph(N={len(self.vertices)}, M={len(self.edges)})"

    def __contains__(self, vid: str) -> bool:
        return vid in self._by_id

    def vertex(self, vid: str) -> ConcreteVertex:
        return self._by_id[vid]

    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def arcs(self) -> list[tuple[str, str, Weight]]:
        return [(e.src, e.dst, e.weight) for e in self.edges]

    def instances_of(self, origin: str) -> list[str]:
        return [v.id for v in self.vertices if v.origin == origin]


def _check(pgt: ParametricGraphTemplate, limit: Optional[int]) -> None:
    violations = validate(pgt)
    if violations:
        raise InvalidTemplate(violations)
    if limit is not None:
        n, m = instantiation_size(pgt)
        if n > limit or m > limit:
            raise SizeLimitExceeded(n, m, limit)


def instantiate(pgt: ParametricGraphTemplate, limit: Optional[int] = DEFAULT_LIMIT) -> ConcreteGraph:
    """Expand every template into its instances.

    Produces the same graph as the leaf-rewriting procedure
    (:func:`instantiate_by_rewriting`) but enumerates instance addresses
    directly.  Raises :class:`SizeLimitExceeded` before doing any work when the
    result would have more than ``limit`` vertices or edges.
    """
    _check(pgt, limit)
    stats["instantiate"] += 1
    vertices = []
    for v in pgt.vertices:
        for addr in pgt.addresses(v):
            vertices.append(ConcreteVertex(vertex_id(v, addr), v, addr))

    edges = []
    for idx, e in enumerate(pgt.edges):
        chain = pgt.edge_templates(e)
        ranges = [range(pgt.parameter(t)) for t in chain[1:]]
        ls = len(pgt.vertex_path(e.src)) - 1
        ld = len(pgt.vertex_path(e.dst)) - 1
        if e.sibling is not None:
            p = pgt.parameter(pgt.owner(e.src))
            for a in product(*ranges):
                if a:
                    b = a[:-1] + (e.sibling(a[-1], p),)
                else:
                    b = a
                edges.append(ConcreteEdge(vertex_id(e.src, a), vertex_id(e.dst, b), e.weight, idx))
        else:
            for a in product(*ranges):
                edges.append(
                    ConcreteEdge(vertex_id(e.src, a[:ls]), vertex_id(e.dst, a[:ld]), e.weight, idx)
                )
    return ConcreteGraph(vertices, edges)


def instantiate_by_rewriting(
    pgt: ParametricGraphTemplate,
    limit: Optional[int] = DEFAULT_LIMIT,
    pick: str = "first",
) -> ConcreteGraph:
    """Literal leaf-rewriting instantiation.

    While more than one template remains, a leaf template is picked
    (``"first"`` or ``"last"`` in pre-order) and each of its vertices is
    replaced by ``P`` copies; edges touching it are copied with it.  Slow, and
    kept as an independent check of :func:`instantiate`.
    """
    if pick not in ("first", "last"):
        raise ValueError(f"pick must be 'first' or 'last', got {pick!r}")
    _check(pgt, limit)
    stats["instantiate"] += 1
    order = {tid: i for i, tid in enumerate(pgt.template_ids())}

    # vertex key: (origin, frozenset of (template, index)); membership: templates not yet expanded
    member: dict[tuple, frozenset] = {}
    for v in pgt.vertices:
        member[(v, frozenset())] = frozenset(pgt.vertex_path(v)[1:])
    # edge: [src key, dst key, weight, origin, pending sibling spec]
    edges = [[(e.src, frozenset()), (e.dst, frozenset()), e.weight, i, e.sibling] for i, e in enumerate(pgt.edges)]

    remaining = set(order) - {pgt.root.id}
    while remaining:
        leaves = [t for t in remaining if not any(c.id in remaining for c in pgt.template(t).children)]
        tid = min(leaves, key=order.get) if pick == "first" else max(leaves, key=order.get)
        p = pgt.parameter(tid)

        new_member = {}
        for key, mem in member.items():
            if tid in mem:
                for j in range(p):
                    new_member[(key[0], key[1] | {(tid, j)})] = mem - {tid}
            else:
                new_member[key] = mem

        def copy(key, j):
            return (key[0], key[1] | {(tid, j)})

        new_edges = []
        for src, dst, w, origin, sib in edges:
            s_in = tid in member[src]
            d_in = tid in member[dst]
            if s_in and d_in:
                for j in range(p):
                    if sib is not None:
                        new_edges.append([copy(src, j), copy(dst, sib(j, p)), w, origin, None])
                    else:
                        new_edges.append([copy(src, j), copy(dst, j), w, origin, None])
            elif s_in:
                new_edges.extend([copy(src, j), dst, w, origin, sib] for j in range(p))
            elif d_in:
                new_edges.extend([src, copy(dst, j), w, origin, sib] for j in range(p))
            else:
                new_edges.append([src, dst, w, origin, sib])
        member, edges = new_member, new_edges
        remaining.discard(tid)

    def label(key) -> tuple[str, Address]:
        origin, idx = key
        idx = dict(idx)
        return origin, tuple(idx[t] for t in pgt.vertex_path(origin)[1:])

    vertices = []
    for key in member:
        origin, addr = label(key)
        vertices.append(ConcreteVertex(vertex_id(origin, addr), origin, addr))
    out_edges = [ConcreteEdge(vertex_id(*label(s)), vertex_id(*label(d)), w, o) for s, d, w, o, _ in edges]
    return ConcreteGraph(vertices, out_edges)


def merge_vertex_instances(g: ConcreteGraph, origin: str) -> ConcreteGraph:
    """Collapse all instances of ``origin`` into one vertex with an empty address."""
    hits = {v.id for v in g.vertices if v.origin == origin}
    if not hits:
        raise UnknownVertex(origin)
    merged = ConcreteVertex(vertex_id(origin, ()), origin, ())
    vertices = [v for v in g.vertices if v.id not in hits]
    vertices.append(merged)

    def m(vid):
        return merged.id if vid in hits else vid

    edges = [ConcreteEdge(m(e.src), m(e.dst), e.weight, e.origin) for e in g.edges]
    return ConcreteGraph(vertices, edges)


def _is_dummy(origin: str) -> bool:
    return origin.startswith(DUMMY_PREFIX)


def contract_infinite_edges(g: ConcreteGraph) -> ConcreteGraph:
    """Contract every infinite-weight edge.

    Each contracted class is labelled by its non-dummy member (the smallest
    id if there are several); dummy labels only survive in classes made of
    dummies alone.
    """
    parent = {v.id: v.id for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if e.weight is INF:
            a, b = find(e.src), find(e.dst)
            if a != b:
                parent[a] = b

    classes: dict[str, list[ConcreteVertex]] = {}
    for v in g.vertices:
        classes.setdefault(find(v.id), []).append(v)
    rep = {}
    vertices = []
    for root, members in classes.items():
        real = [v for v in members if not _is_dummy(v.origin)]
        chosen = min(real or members, key=lambda v: v.id)
        vertices.append(chosen)
        for v in members:
            rep[v.id] = chosen.id
    edges = [
        ConcreteEdge(rep[e.src], rep[e.dst], e.weight, e.origin)
        for e in g.edges
        if e.weight is not INF
    ]
    return ConcreteGraph(vertices, edges)


Relabel = Union[dict, Callable[[str, Address], tuple], None]


def label_isomorphic(g1: ConcreteGraph, g2: ConcreteGraph, mapping: Relabel = None) -> bool:
    """Compare labelled vertex and edge multisets after relabelling ``g1``.

    ``mapping`` is either a dict from origin to origin (addresses kept), a
    callable ``(origin, address) -> (origin, address)``, or ``None`` for
    the identity.  A dict missing one of ``g1``'s origins raises
    ``KeyError``.
    """
    if mapping is None:
        def relabel(o, a):
            return o, tuple(a)
    elif isinstance(mapping, dict):
        missing = {v.origin for v in g1.vertices} - mapping.keys()
        if missing:
            raise KeyError(f"mapping does not cover origins {sorted(missing)}")

        def relabel(o, a):
            return mapping[o], tuple(a)
    else:
        relabel = mapping

    lab1 = {v.id: relabel(v.origin, v.address) for v in g1.vertices}
    lab2 = {v.id: (v.origin, tuple(v.address)) for v in g2.vertices}
    if Counter(lab1.values()) != Counter(lab2.values()):
        return False
    e1 = Counter((lab1[e.src], lab1[e.dst], e.weight) for e in g1.edges)
    e2 = Counter((lab2[e.src], lab2[e.dst], e.weight) for e in g2.edges)
    return e1 == e2


# --- export ---------------------------------------------------------------


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _edge_label(w: Weight, sibling=None) -> str:
    label = format_weight(w)
    if sibling is not None:
        if hasattr(sibling, "delta"):
            label += f" ({sibling.delta:+d})"
        else:
            label += " (perm)"
    return label


def export_dot(obj: Union[ConcreteGraph, ParametricGraphTemplate]) -> str:
    """Graphviz text with deterministic ordering.

    Templates other than the root become nested ``cluster_`` subgraphs
    captioned with their parameter; the root is the top-level graph.
    """
    lines = ["digraph G {"]
    if isinstance(obj, ParametricGraphTemplate):
        pgt = obj
        lines.append(f"  label={_q(f'{pgt.root.id} ×{pgt.root.parameter}')};")

        def emit(node, indent):
            pad = "  " * indent
            for v in sorted(node.vertices):
                lines.append(f"{pad}{_q(v)};")
            for child in sorted(node.children, key=lambda c: c.id):
                lines.append(f"{pad}subgraph {_q('cluster_' + child.id)} {{")
                lines.append(f"{pad}  label={_q(f'{child.id} ×{child.parameter}')};")
                emit(child, indent + 1)
                lines.append(f"{pad}}}")

        emit(pgt.root, 1)
        for e in sorted(pgt.edges, key=lambda e: (e.src, e.dst, format_weight(e.weight))):
            lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [label={_q(_edge_label(e.weight, e.sibling))}];")
    else:
        for vid in sorted(obj.vertex_ids()):
            lines.append(f"  {_q(vid)};")
        for e in sorted(obj.edges, key=lambda e: (e.src, e.dst, format_weight(e.weight))):
            lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [label={_q(format_weight(e.weight))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def concrete_to_dict(g: ConcreteGraph) -> dict:
    """JSON-ready form: vertices carry origin and address labels."""
    vertices = [
        {"id": v.id, "origin": v.origin, "address": list(v.address)}
        for v in sorted(g.vertices, key=lambda v: v.id)
    ]
    edges = []
    for e in sorted(g.edges, key=lambda e: (e.src, e.dst, format_weight(e.weight), -1 if e.origin is None else e.origin)):
        item = {"src": e.src, "dst": e.dst, "weight": format_weight(e.weight)}
        if e.origin is not None:
            item["origin"] = e.origin
        edges.append(item)
    return {"vertices": vertices, "edges": edges}


__all__ = [
    "ConcreteEdge",
    "ConcreteGraph",
    "ConcreteVertex",
    "DEFAULT_LIMIT",
    "concrete_to_dict",
    "contract_infinite_edges",
    "export_dot",
    "instantiate",
    "instantiate_by_rewriting",
    "label_isomorphic",
    "merge_vertex_instances",
    "parse_vertex_ref",
    "stats",
    "vertex_id",
]
