"""Exact maximum flow on flat graphs and the two template flow queries.

The flat solver is Dinic's blocking-flow method on Python integers, so
capacities of any size stay exact.  Infinite capacities are replaced by one
more than the sum of all finite capacities, which no finite cut can reach.

Template queries never materialize the instantiation:

* all-s-t flow (every instance of ``s`` is a source, every instance of ``t``
  a sink) is a flat flow on the edge-reweighted template graph;
* single-s-t flow (one addressed instance each) first moves both instances
  into the root by partial instantiation and then does the same.

The ``brute_force_*`` functions instantiate and solve directly; they are the
oracles the template queries are tested against.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import BadAddress, InvalidTemplate, SourceEqualsSink, UnknownVertex
from .instantiate import DEFAULT_LIMIT, instantiate, vertex_id
from .template import ParametricGraphTemplate, validate
from .transforms import edge_reweight, partial_instantiate_upwards
from .weights import INF, Weight

SUPER_SOURCE = "@source"
SUPER_SINK = "@sink"


@dataclass(frozen=True)
class FlowResult:
    """Outcome of a max-flow solve.

    ``flow`` and ``capacity`` are keyed by vertex pair; parallel edges are
    summed and self-loops dropped.  ``source_side`` is the set of vertices
    reachable from the source in the final residual graph.
    """

    value: Weight
    source: str
    sink: str
    flow: dict
    capacity: dict
    source_side: frozenset

    def cut_capacity(self) -> Weight:
        total = 0
        for (u, v), c in self.capacity.items():
            if u in self.source_side and v not in self.source_side:
                if c is INF:
                    return INF
                total += c
        return total

    def check(self) -> None:
        """Assert capacity bounds, conservation and strong duality."""
        net: dict[str, int] = {}
        for (u, v), f in self.flow.items():
            c = self.capacity[(u, v)]
            assert f >= 0, f"negative flow on {u}->{v}"
            assert c is INF or f <= c, f"flow {f} exceeds capacity {c} on {u}->{v}"
            net[u] = net.get(u, 0) - f
            net[v] = net.get(v, 0) + f
        for x, balance in net.items():
            if x not in (self.source, self.sink):
                assert balance == 0, f"conservation violated at {x}: {balance}"
        assert self.source in self.source_side and self.sink not in self.source_side or self.value is INF
        if self.value is not INF:
            assert -net.get(self.source, 0) == self.value, "value differs from net outflow of the source"
            assert self.cut_capacity() == self.value, "value differs from the reported cut"


def _solve(n: int, arcs: list[tuple[int, int, int]], s: int, t: int):
    """Dinic on integer vertices. Returns (value, residual caps, edge arrays)."""
    head: list[list[int]] = [[] for _ in range(n)]
    to: list[int] = []
    cap: list[int] = []
    for u, v, c in arcs:
        head[u].append(len(to))
        to.append(v)
        cap.append(c)
        head[v].append(len(to))
        to.append(u)
        cap.append(0)

    value = 0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in head[u]:
                if cap[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[u] + 1
                    queue.append(to[e])
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            # one augmenting path in the level graph, current-arc pointers kept
            path: list[int] = []
            u = s
            pushed = 0
            while True:
                if u == t:
                    pushed = min(cap[e] for e in path)
                    for e in path:
                        cap[e] -= pushed
                        cap[e ^ 1] += pushed
                    break
                adj = head[u]
                while it[u] < len(adj):
                    e = adj[it[u]]
                    if cap[e] > 0 and level[to[e]] == level[u] + 1:
                        break
                    it[u] += 1
                if it[u] < len(adj):
                    path.append(adj[it[u]])
                    u = to[adj[it[u]]]
                    continue
                if u == s:
                    break
                level[u] = -1
                e = path.pop()
                u = to[e ^ 1]
                it[u] += 1
            if not pushed:
                break
            value += pushed
    return value, cap, to, head


def max_flow(vertices, arcs, s: str, t: str) -> FlowResult:
    """Maximum ``s``-``t`` flow on an explicit vertex list and arc list."""
    if s == t:
        raise SourceEqualsSink(f"source and sink are both {s!r}")
    index = {v: i for i, v in enumerate(vertices)}
    for x in (s, t):
        if x not in index:
            raise UnknownVertex(x)
    summed: dict[tuple[str, str], Weight] = {}
    for u, v, w in arcs:
        if u == v:
            continue
        prev = summed.get((u, v), 0)
        summed[(u, v)] = INF if (w is INF or prev is INF) else prev + w
    big = 1 + sum(c for c in summed.values() if c is not INF)
    keys = list(summed)
    int_arcs = [(index[u], index[v], big if summed[(u, v)] is INF else summed[(u, v)]) for u, v in keys]
    value, cap, to, head = _solve(len(index), int_arcs, index[s], index[t])

    flow = {k: int_arcs[i][2] - cap[2 * i] for i, k in enumerate(keys)}
    names = list(index)
    seen = {index[s]}
    queue = deque([index[s]])
    while queue:
        u = queue.popleft()
        for e in head[u]:
            if cap[e] > 0 and to[e] not in seen:
                seen.add(to[e])
                queue.append(to[e])
    side = frozenset(names[i] for i in seen)
    return FlowResult(INF if value >= big else value, s, t, flow, summed, side)


def max_st_flow(g, s: str, t: str) -> FlowResult:
    """Maximum flow on any flat graph exposing ``vertex_ids()`` and ``arcs()``."""
    return max_flow(g.vertex_ids(), g.arcs(), s, t)


def _require_valid(pgt: ParametricGraphTemplate) -> None:
    violations = validate(pgt)
    if violations:
        raise InvalidTemplate(violations)


def max_all_st_flow(pgt: ParametricGraphTemplate, s: str, t: str) -> FlowResult:
    """All-instances flow, solved on the reweighted template graph."""
    _require_valid(pgt)
    return max_st_flow(edge_reweight(pgt), s, t)


def max_single_st_flow(
    pgt: ParametricGraphTemplate, s: str, addr_s, t: str, addr_t
) -> FlowResult:
    """Flow between the instances ``s@addr_s`` and ``t@addr_t``.

    Both instances are lifted into the root by partial instantiation (first
    ``s``, then the image of ``t`` in the result), then the all-s-t solver
    runs on the outcome.  The returned flow lives on the transformed
    template's vertices.
    """
    _require_valid(pgt)
    addr_s, addr_t = tuple(addr_s), tuple(addr_t)
    for v, a in ((s, addr_s), (t, addr_t)):
        if not pgt.has_vertex(v):
            raise UnknownVertex(v)
        if not pgt.is_valid_address(v, a):
            raise BadAddress(f"{a!r} is not an instance address of {v!r}")
    if (s, addr_s) == (t, addr_t):
        raise SourceEqualsSink(f"source and sink are both {vertex_id(s, addr_s)!r}")
    first = partial_instantiate_upwards(pgt, s, addr_s)
    t1, at1 = first.relabeling.to_new(t, addr_t)
    second = partial_instantiate_upwards(first.pgt, t1, at1)
    s2, as2 = second.relabeling.to_new(s, ())
    assert as2 == () and s2 == s
    return max_st_flow(edge_reweight(second.pgt), s, t1)


def brute_force_all_st_flow(
    pgt: ParametricGraphTemplate, s: str, t: str, limit: Optional[int] = DEFAULT_LIMIT
) -> FlowResult:
    """Instantiate, attach a super-source and super-sink, and solve."""
    if s == t:
        raise SourceEqualsSink(f"source and sink are both {s!r}")
    g = instantiate(pgt, limit)
    arcs = g.arcs()
    arcs += [(SUPER_SOURCE, x, INF) for x in g.instances_of(s)]
    arcs += [(x, SUPER_SINK, INF) for x in g.instances_of(t)]
    return max_flow(g.vertex_ids() + [SUPER_SOURCE, SUPER_SINK], arcs, SUPER_SOURCE, SUPER_SINK)


def brute_force_single_st_flow(
    pgt: ParametricGraphTemplate, s: str, addr_s, t: str, addr_t, limit: Optional[int] = DEFAULT_LIMIT
) -> FlowResult:
    """Instantiate and solve between two labelled concrete vertices."""
    g = instantiate(pgt, limit)
    src, dst = vertex_id(s, tuple(addr_s)), vertex_id(t, tuple(addr_t))
    for x in (src, dst):
        if x not in g:
            raise BadAddress(f"no concrete vertex {x!r}")
    return max_st_flow(g, src, dst)
