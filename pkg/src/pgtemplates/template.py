"""Parametric graph templates: data model, structural queries and validation.

A template graph is a small directed graph whose vertices are grouped into a
laminar family of *templates*.  The family is stored as a tree of
:class:`TemplateNode` objects; each node owns the vertices that belong to it
and to none of its descendants.  Instantiating the template repeats every
non-root template ``parameter`` times, recursively.

Instances are addressed by an *instance address*: a tuple holding one index
per template on the path from the root (exclusive) down to the template a
vertex belongs to.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional, Union

from .errors import UnknownTemplate, UnknownVertex
from .weights import INF, Weight

DUMMY_PREFIX = "__dummy"

Address = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class CyclicShift:
    """Sibling function ``j -> (j + delta) mod P``."""

    delta: int

    def __call__(self, j: int, parameter: int) -> int:
        return (j + self.delta) % parameter

    def is_bijection(self, parameter: int) -> bool:
        return True


@dataclass(frozen=True)
class Permutation:
    """Sibling function given as an explicit table of instance indices."""

    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))

    def __call__(self, j: int, parameter: int) -> int:
        return self.map[j]

    def is_bijection(self, parameter: int) -> bool:
        return len(self.map) == parameter and sorted(self.map) == list(range(parameter))


SiblingSpec = Union[CyclicShift, Permutation]


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    weight: Weight = 1
    sibling: Optional[SiblingSpec] = None
    # input position at ``dst``; only loop programs use it
    rank: Optional[int] = None

    def with_weight(self, weight: Weight) -> "Edge":
        return Edge(self.src, self.dst, weight, self.sibling, self.rank)


@dataclass(frozen=True)
class TemplateNode:
    id: str
    parameter: int
    vertices: frozenset = frozenset()
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "children", tuple(self.children))

    def walk(self) -> Iterator["TemplateNode"]:
        """Pre-order traversal of this subtree."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.subject}: {self.message}"


class ParametricGraphTemplate:
    """Template graph + template tree + parameters.

    Construction never fails on semantically invalid input; call
    :func:`validate` to get the list of violations.  Instances are treated
    as immutable.
    """

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Edge],
        root: TemplateNode,
        dummies: Iterable[str] = (),
    ):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.root = root
        self.dummies = frozenset(dummies)

        self._nodes: dict[str, TemplateNode] = {}
        self._parent: dict[str, Optional[str]] = {}
        self._depth: dict[str, int] = {}
        self._owner: dict[str, str] = {}
        queue = deque([(root, None, 0)])
        while queue:
            node, parent, depth = queue.popleft()
            if node.id in self._nodes:
                continue
            self._nodes[node.id] = node
            self._parent[node.id] = parent
            self._depth[node.id] = depth
            for v in node.vertices:
                # deeper owner wins on (invalid) overlaps
                self._owner[v] = node.id
            for child in node.children:
                queue.append((child, node.id, depth + 1))
        self._vertex_set = frozenset(self.vertices)

    def __repr__(self) -> str:
        return (
            f"ParametricGraphTemplate(n={len(self.vertices)}, m={len(self.edges)}, "
            f"templates={len(self._nodes)}, h={self.height})"
        )

    # --- tree queries -------------------------------------------------

    def template(self, tid: str) -> TemplateNode:
        try:
            return self._nodes[tid]
        except KeyError:
            raise UnknownTemplate(tid) from None

    def template_ids(self) -> list[str]:
        return [node.id for node in self.root.walk()]

    def has_template(self, tid: str) -> bool:
        return tid in self._nodes

    def parent(self, tid: str) -> Optional[str]:
        self.template(tid)
        return self._parent[tid]

    def depth(self, tid: str) -> int:
        self.template(tid)
        return self._depth[tid]

    def parameter(self, tid: str) -> int:
        return self.template(tid).parameter

    def path(self, tid: str) -> list[str]:
        """Template ids from the root down to ``tid`` (both inclusive)."""
        self.template(tid)
        out = []
        cur: Optional[str] = tid
        while cur is not None:
            out.append(cur)
            cur = self._parent[cur]
        out.reverse()
        return out

    def is_ancestor(self, a: str, b: str) -> bool:
        """True if template ``a`` is ``b`` or one of its ancestors."""
        cur: Optional[str] = b
        while cur is not None:
            if cur == a:
                return True
            cur = self._parent[cur]
        return False

    @property
    def height(self) -> int:
        return max(self._depth.values())

    def subtree_vertices(self, tid: str) -> set[str]:
        return {v for node in self.template(tid).walk() for v in node.vertices}

    # --- vertex queries -----------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def owner(self, v: str) -> str:
        if v not in self._vertex_set or v not in self._owner:
            raise UnknownVertex(v)
        return self._owner[v]

    def vertex_path(self, v: str) -> list[str]:
        """Templates on the path from the root to ``T(v)``."""
        return self.path(self.owner(v))

    def address_shape(self, v: str) -> tuple:
        """Parameters along the root-exclusive path to ``T(v)``."""
        return tuple(self._nodes[t].parameter for t in self.vertex_path(v)[1:])

    def addresses(self, v: str) -> Iterator[Address]:
        """All instance addresses of ``v`` in instantiation order."""
        return product(*(range(p) for p in self.address_shape(v)))

    def instance_count(self, v: str) -> int:
        return math.prod(self.address_shape(v))

    def is_valid_address(self, v: str, address) -> bool:
        shape = self.address_shape(v)
        address = tuple(address)
        return len(address) == len(shape) and all(
            isinstance(i, int) and 0 <= i < p for i, p in zip(address, shape)
        )

    # --- edge queries --------------------------------------------------

    def edge_templates(self, e: Edge) -> list[str]:
        """Templates containing at least one endpoint of ``e``, root first."""
        pu = self.vertex_path(e.src)
        pv = self.vertex_path(e.dst)
        longer, shorter = (pu, pv) if len(pu) >= len(pv) else (pv, pu)
        if longer[: len(shorter)] == shorter:
            return longer
        seen = list(longer)
        seen.extend(t for t in shorter if t not in longer)
        return seen

    def is_cross_template(self, e: Edge) -> bool:
        return self.owner(e.src) != self.owner(e.dst)


# --- operations -------------------------------------------------------


def template_of(pgt: ParametricGraphTemplate, v: str) -> str:
    """Id of the deepest template owning ``v``."""
    return pgt.owner(v)


def tree_height(pgt: ParametricGraphTemplate) -> int:
    return pgt.height


def lca_template(pgt: ParametricGraphTemplate, u: str, v: str) -> str:
    pu = pgt.vertex_path(u)
    pv = pgt.vertex_path(v)
    lca = pu[0]
    for a, b in zip(pu, pv):
        if a != b:
            break
        lca = a
    return lca


def boundary_vertices(pgt: ParametricGraphTemplate, tid: str) -> set[str]:
    """Vertices of the parent of ``tid`` adjacent to a vertex owned by ``tid``."""
    parent = pgt.parent(tid)
    if parent is None:
        return set()
    out = set()
    for e in pgt.edges:
        ou, ov = pgt.owner(e.src), pgt.owner(e.dst)
        if ou == tid and ov == parent:
            out.add(e.dst)
        elif ov == tid and ou == parent:
            out.add(e.src)
    return out


def instantiation_size(pgt: ParametricGraphTemplate) -> tuple[int, int]:
    """Exact vertex and edge counts of the instantiation."""
    prod_of = _path_products(pgt)
    n = sum(prod_of[pgt.owner(v)] for v in pgt.vertices)
    m = 0
    for e in pgt.edges:
        m += math.prod(pgt.parameter(t) for t in pgt.edge_templates(e))
    return n, m


def _path_products(pgt: ParametricGraphTemplate) -> dict[str, int]:
    """Product of parameters on the root path of every template (pre-order)."""
    out = {pgt.root.id: pgt.root.parameter}
    stack = [pgt.root]
    while stack:
        node = stack.pop()
        for child in node.children:
            out[child.id] = out[node.id] * child.parameter
            stack.append(child)
    return out


def is_template_acyclic(pgt: ParametricGraphTemplate) -> tuple[bool, Optional[list[str]]]:
    """Check for template-cycles.

    A template-cycle is a simple path that starts and ends in the same
    template but visits another template in between.  Every such path
    contains a cross-template edge ``(u, x)`` followed by a simple path from
    ``x`` to some ``w != u`` with ``T(w) == T(u)`` that avoids ``u``; that is
    what we search for.  Returns ``(True, None)`` or ``(False, witness)``.
    """
    succ: dict[str, list[str]] = {v: [] for v in pgt.vertices}
    for e in pgt.edges:
        succ[e.src].append(e.dst)
    for e in pgt.edges:
        u, x = e.src, e.dst
        home = pgt.owner(u)
        if pgt.owner(x) == home:
            continue
        prev = {x: None}
        queue = deque([x])
        while queue:
            y = queue.popleft()
            if y != u and pgt.owner(y) == home:
                path = []
                cur: Optional[str] = y
                while cur is not None:
                    path.append(cur)
                    cur = prev[cur]
                path.append(u)
                path.reverse()
                return False, path
            for z in succ[y]:
                if z != u and z not in prev:
                    prev[z] = y
                    queue.append(z)
    return True, None


def validate(pgt: ParametricGraphTemplate) -> list[Violation]:
    """Return every broken structural rule; an empty list means valid."""
    out: list[Violation] = []
    seen: set[str] = set()
    for v in pgt.vertices:
        if v in seen:
            out.append(Violation("DuplicateVertex", v, "vertex listed twice"))
        seen.add(v)
        if not isinstance(v, str) or not v:
            out.append(Violation("VertexId", repr(v), "vertex ids are non-empty strings"))
        elif "@" in v:
            out.append(Violation("VertexId", v, "'@' is reserved for instance references"))
        elif v.startswith(DUMMY_PREFIX) and v not in pgt.dummies:
            out.append(Violation("ReservedId", v, f"prefix {DUMMY_PREFIX!r} is reserved"))

    tids: set[str] = set()
    owned_by: dict[str, list[str]] = {}
    for node in pgt.root.walk():
        if node.id in tids:
            out.append(Violation("DuplicateTemplate", node.id, "template id used twice"))
        tids.add(node.id)
        p = node.parameter
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            out.append(Violation("Parameter", node.id, f"parameter must be a positive integer, got {p!r}"))
        if node is not pgt.root and not any(n.vertices for n in node.walk()):
            out.append(Violation("EmptyTemplate", node.id, "template contains no vertices"))
        for v in node.vertices:
            owned_by.setdefault(v, []).append(node.id)
            if v not in seen:
                out.append(Violation("UnknownVertex", node.id, f"owns undeclared vertex {v!r}"))
    if pgt.root.parameter != 1:
        out.append(Violation("RootParameter", pgt.root.id, "root parameter must be 1"))
    for v in pgt.vertices:
        owners = owned_by.get(v, [])
        if not owners:
            out.append(Violation("UnownedVertex", v, "vertex belongs to no template"))
        elif len(owners) > 1:
            out.append(Violation("MultiplyOwned", v, f"owned by {sorted(owners)}"))
    structural = bool(out)

    for i, e in enumerate(pgt.edges):
        name = f"edge#{i} {e.src}->{e.dst}"
        if e.src not in seen or e.dst not in seen:
            out.append(Violation("UnknownEndpoint", name, "edge endpoint is not a vertex"))
            continue
        w = e.weight
        if w is not INF and (isinstance(w, bool) or not isinstance(w, int) or w < 0):
            out.append(Violation("Weight", name, f"weight must be a nonnegative integer or INF, got {w!r}"))
        if e.rank is not None and (isinstance(e.rank, bool) or not isinstance(e.rank, int) or e.rank < 0):
            out.append(Violation("Rank", name, f"rank must be a nonnegative integer, got {e.rank!r}"))
        if structural:
            continue
        ou, ov = pgt.owner(e.src), pgt.owner(e.dst)
        if e.sibling is not None:
            if ou != ov:
                out.append(Violation("SiblingOwner", name, "sibling edge endpoints must belong to the same template"))
            elif not e.sibling.is_bijection(pgt.parameter(ou)):
                out.append(Violation("SiblingFunction", name, "sibling function is not a bijection"))
        elif ou != ov and pgt.parent(ou) != ov and pgt.parent(ov) != ou:
            out.append(Violation("NoJumping", name, f"connects templates {ou} and {ov}, which are not parent and child"))
    return out
