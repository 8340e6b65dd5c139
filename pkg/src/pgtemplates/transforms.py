"""Template-to-template and template-to-graph transformations.

* :func:`edge_reweight` folds the parameters into the edge weights, giving a
  flat graph over the template vertices.
* :func:`instance_merge` moves a vertex into the root through chains of
  infinite-weight dummy edges, which amounts to merging all its instances.
* :func:`partial_instantiate_upwards` peels a single instance of a vertex off
  every template on its root path, so that the instance ends up in the root
  while the instantiation stays the same.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import BadAddress, InvalidTemplate, UnknownVertex, UnsupportedSiblingSplit
from .template import (
    DUMMY_PREFIX,
    Address,
    Edge,
    ParametricGraphTemplate,
    TemplateNode,
    _path_products,
    validate,
)
from .weights import INF, Weight, scale


def _require_valid(pgt: ParametricGraphTemplate) -> None:
    violations = validate(pgt)
    if violations:
        raise InvalidTemplate(violations)


# --- edge reweighting ------------------------------------------------------


@dataclass(frozen=True)
class ReweightedEdge:
    src: str
    dst: str
    weight: Weight
    origin: int


class ReweightedGraph:
    """Flat graph on the template vertices with parameter-scaled weights."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)

    def __repr__(self) -> str:
        return f"ReweightedGraph(n={len(self.vertices)}, m={len(self.edges)})"

    def vertex_ids(self) -> list[str]:
        return list(self.vertices)

    def arcs(self) -> list[tuple[str, str, Weight]]:
        return [(e.src, e.dst, e.weight) for e in self.edges]


def edge_reweight(pgt: ParametricGraphTemplate) -> ReweightedGraph:
    """Scale each edge by the parameters of all templates holding an endpoint.

    Root-path products are computed once per template in a pre-order pass, so
    the cost is linear in the template size whatever the parameters are.
    """
    prod_of = _path_products(pgt)
    edges = []
    for i, e in enumerate(pgt.edges):
        tu, tv = pgt.owner(e.src), pgt.owner(e.dst)
        deeper = tu if pgt.depth(tu) >= pgt.depth(tv) else tv
        edges.append(ReweightedEdge(e.src, e.dst, scale(e.weight, prod_of[deeper]), i))
    return ReweightedGraph(pgt.vertices, edges)


# --- mutable working copy ----------------------------------------------------


class _Draft:
    """Editable copy of a template used while a transform runs."""

    def __init__(self, pgt: ParametricGraphTemplate):
        self.vertices = list(pgt.vertices)
        self.edges = list(pgt.edges)
        self.dummies = set(pgt.dummies)
        self.root = pgt.root.id
        self.param: dict[str, int] = {}
        self.parent: dict[str, Optional[str]] = {}
        self.children: dict[str, list[str]] = {}
        self.owned: dict[str, set[str]] = {}
        for node in pgt.root.walk():
            self.param[node.id] = node.parameter
            self.children[node.id] = [c.id for c in node.children]
            self.owned[node.id] = set(node.vertices)
            for c in node.children:
                self.parent[c.id] = node.id
        self.parent[self.root] = None
        self.owner = {v: t for t, vs in self.owned.items() for v in vs}
        self._taken = set(self.vertices) | set(self.param)

    def fresh(self, base: str) -> str:
        k = 1
        while f"{base}~{k}" in self._taken:
            k += 1
        name = f"{base}~{k}"
        self._taken.add(name)
        return name

    def new_dummy(self) -> str:
        k = 0
        while f"{DUMMY_PREFIX}{k}" in self._taken:
            k += 1
        name = f"{DUMMY_PREFIX}{k}"
        self._taken.add(name)
        self.dummies.add(name)
        self.vertices.append(name)
        return name

    def path(self, tid: str) -> list[str]:
        out = []
        cur: Optional[str] = tid
        while cur is not None:
            out.append(cur)
            cur = self.parent[cur]
        return out[::-1]

    def subtree(self, tid: str) -> list[str]:
        out, stack = [], [tid]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(self.children[t]))
        return out

    def move_vertex(self, v: str, tid: str) -> None:
        self.owned[self.owner[v]].discard(v)
        self.owned[tid].add(v)
        self.owner[v] = tid

    def prune_empty(self) -> None:
        def has_vertices(t):
            return bool(self.owned[t]) or any(has_vertices(c) for c in self.children[t])

        for t in list(self.subtree(self.root)):
            if t != self.root and t in self.param and not has_vertices(t):
                for dead in self.subtree(t):
                    del self.param[dead], self.owned[dead]
                self.children[self.parent[t]].remove(t)

    def freeze(self) -> ParametricGraphTemplate:
        def build(t):
            return TemplateNode(t, self.param[t], frozenset(self.owned[t]), tuple(build(c) for c in self.children[t]))

        return ParametricGraphTemplate(self.vertices, self.edges, build(self.root), self.dummies)


# --- instance merging --------------------------------------------------------


def instance_merge(pgt: ParametricGraphTemplate, v: str) -> tuple[ParametricGraphTemplate, dict]:
    """Move ``v`` up to the root, one template level at a time.

    At each level every edge linking ``v`` to another template is routed
    through a fresh dummy vertex in ``T(v)``; the half of the detour touching
    ``v`` gets infinite weight and the other half keeps the original weight.
    Self-loops at ``v`` are detoured the same way so their multiplicity
    survives.  Sibling edges leaving ``v`` lose their sibling function once
    ``v`` leaves the template: the function is a bijection, so the merged
    vertex meets every instance anyway.

    Returns the new template and the origin relabelling (the identity on the
    original vertices) under which, after contracting infinite edges, its
    instantiation matches the original instantiation with all copies of ``v``
    merged.
    """
    _require_valid(pgt)
    if not pgt.has_vertex(v):
        raise UnknownVertex(v)
    d = _Draft(pgt)
    while d.owner[v] != d.root:
        home = d.owner[v]
        edges = []
        for e in d.edges:
            if e.src == v and e.dst == v:
                dummy = d.new_dummy()
                d.owned[home].add(dummy)
                d.owner[dummy] = home
                edges.append(Edge(v, dummy, INF))
                edges.append(Edge(dummy, v, e.weight, None, e.rank))
            elif e.dst == v and d.owner[e.src] != home:
                dummy = d.new_dummy()
                d.owned[home].add(dummy)
                d.owner[dummy] = home
                edges.append(Edge(e.src, dummy, e.weight))
                edges.append(Edge(dummy, v, INF, None, e.rank))
            elif e.src == v and d.owner[e.dst] != home:
                dummy = d.new_dummy()
                d.owned[home].add(dummy)
                d.owner[dummy] = home
                edges.append(Edge(v, dummy, INF))
                edges.append(Edge(dummy, e.dst, e.weight, None, e.rank))
            elif e.sibling is not None and v in (e.src, e.dst):
                edges.append(Edge(e.src, e.dst, e.weight, None, e.rank))
            else:
                edges.append(e)
        d.edges = edges
        d.move_vertex(v, d.parent[home])
    d.prune_empty()
    return d.freeze(), {x: x for x in pgt.vertices}


# --- partial instantiation -----------------------------------------------------


@dataclass(frozen=True)
class _Split:
    pos: int  # index into the address
    chosen: int
    subtree: frozenset  # vertices of the split template before the split
    copy_of: dict  # copy vertex -> original vertex
    copies: dict  # original vertex -> copy vertex

    def to_old(self, x, a):
        if x in self.copy_of:
            i = a[self.pos]
            i = i if i < self.chosen else i + 1
            return self.copy_of[x], a[: self.pos] + (i,) + a[self.pos + 1 :]
        if x in self.subtree:
            return x, a[: self.pos] + (self.chosen,) + a[self.pos + 1 :]
        return x, a

    def to_new(self, x, a):
        if x in self.subtree:
            i = a[self.pos]
            if i == self.chosen:
                return x, a[: self.pos] + (0,) + a[self.pos + 1 :]
            i = i if i < self.chosen else i - 1
            return self.copies[x], a[: self.pos] + (i,) + a[self.pos + 1 :]
        return x, a


@dataclass(frozen=True)
class _Dissolve:
    pos: int
    affected: frozenset

    def to_old(self, x, a):
        if x in self.affected:
            return x, a[: self.pos] + (0,) + a[self.pos :]
        return x, a

    def to_new(self, x, a):
        if x in self.affected:
            return x, a[: self.pos] + a[self.pos + 1 :]
        return x, a


@dataclass
class Relabeling:
    """Maps instance labels between a template and its partial instantiation.

    Calling it maps a label of the new template's instantiation back to the
    original, which is the direction :func:`label_isomorphic` expects.
    """

    steps: list = field(default_factory=list)

    def to_old(self, origin: str, address) -> tuple[str, Address]:
        a = tuple(address)
        for step in reversed(self.steps):
            origin, a = step.to_old(origin, a)
        return origin, a

    def to_new(self, origin: str, address) -> tuple[str, Address]:
        a = tuple(address)
        for step in self.steps:
            origin, a = step.to_new(origin, a)
        return origin, a

    __call__ = to_old

    def then(self, other: "Relabeling") -> "Relabeling":
        return Relabeling(self.steps + other.steps)


@dataclass(frozen=True)
class PartialInstantiation:
    pgt: ParametricGraphTemplate
    vertex: str
    relabeling: Relabeling
    splits: int  # number of templates that were split


def _split(d: _Draft, tid: str, chosen: int) -> _Split:
    sub = d.subtree(tid)
    sub_set = set(sub)
    for e in d.edges:
        if e.sibling is not None and d.owner[e.src] == tid:
            raise UnsupportedSiblingSplit(
                f"template {tid!r} carries sibling edge {e.src}->{e.dst} and would have to be split"
            )
    vertices = [v for t in sub for v in sorted(d.owned[t])]
    copies = {v: d.fresh(v) for v in vertices}
    tcopies = {t: d.fresh(t) for t in sub}
    for t in sub:
        c = tcopies[t]
        d.param[c] = d.param[t] - 1 if t == tid else d.param[t]
        d.children[c] = [tcopies[x] for x in d.children[t]]
        d.owned[c] = {copies[v] for v in d.owned[t]}
        d.parent[c] = d.parent[t] if t == tid else tcopies[d.parent[t]]
        for v in d.owned[t]:
            d.owner[copies[v]] = c
    siblings = d.children[d.parent[tid]]
    siblings.insert(siblings.index(tid) + 1, tcopies[tid])
    d.param[tid] = 1
    d.vertices.extend(copies[v] for v in vertices)
    d.dummies.update(copies[v] for v in vertices if v in d.dummies)

    added = []
    for e in d.edges:
        s_in, t_in = e.src in copies, e.dst in copies
        if s_in or t_in:
            added.append(
                Edge(copies.get(e.src, e.src), copies.get(e.dst, e.dst), e.weight, e.sibling, e.rank)
            )
    d.edges.extend(added)
    pos = len(d.path(tid)) - 2
    return _Split(pos, chosen, frozenset(vertices), {c: v for v, c in copies.items()}, copies)


def _dissolve(d: _Draft, tid: str) -> _Dissolve:
    """Remove a parameter-1 template, handing its contents to the parent."""
    assert d.param[tid] == 1
    parent = d.parent[tid]
    affected = frozenset(v for t in d.subtree(tid) for v in d.owned[t])
    pos = len(d.path(tid)) - 2
    # sibling functions on a single instance are the identity
    d.edges = [
        Edge(e.src, e.dst, e.weight, None, e.rank)
        if e.sibling is not None and d.owner[e.src] == tid
        else e
        for e in d.edges
    ]
    for v in list(d.owned[tid]):
        d.move_vertex(v, parent)
    siblings = d.children[parent]
    i = siblings.index(tid)
    siblings[i : i + 1] = d.children[tid]
    for c in d.children[tid]:
        d.parent[c] = parent
    del d.param[tid], d.owned[tid], d.children[tid], d.parent[tid]
    return _Dissolve(pos, affected)


def partial_instantiate_upwards(
    pgt: ParametricGraphTemplate, v: str, address
) -> PartialInstantiation:
    """Bring the instance ``v@address`` into the root without changing the graph.

    Every template on the root path with parameter ``P > 1`` is split,
    top-down, into a parameter-1 template holding the addressed instance and a
    fresh copy of its subtree with parameter ``P - 1`` (instances renumbered in
    order, the addressed one removed).  The path templates, all of parameter 1
    by then, are dissolved into the root.

    Raises :class:`BadAddress` for an address that does not fit ``v`` and
    :class:`UnsupportedSiblingSplit` if a template that must be split carries
    sibling edges.
    """
    _require_valid(pgt)
    if not pgt.has_vertex(v):
        raise UnknownVertex(v)
    address = tuple(address)
    if not pgt.is_valid_address(v, address):
        raise BadAddress(f"{address!r} is not an instance address of {v!r} (shape {pgt.address_shape(v)})")
    d = _Draft(pgt)
    steps: list = []
    path = d.path(d.owner[v])[1:]
    splits = 0
    for level, tid in enumerate(path):
        if d.param[tid] > 1:
            steps.append(_split(d, tid, address[level]))
            splits += 1
    for tid in reversed(path):
        steps.append(_dissolve(d, tid))
    return PartialInstantiation(d.freeze(), v, Relabeling(steps), splits)


__all__ = [
    "PartialInstantiation",
    "Relabeling",
    "ReweightedGraph",
    "edge_reweight",
    "instance_merge",
    "partial_instantiate_upwards",
]
