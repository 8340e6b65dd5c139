"""Small named templates and a random generator of valid templates."""

from __future__ import annotations

import random
from typing import Optional

from .template import CyclicShift, Edge, ParametricGraphTemplate, Permutation, TemplateNode


def figure_one() -> ParametricGraphTemplate:
    """Four templates nested two deep: T0 > {T1, T2 > T3}, parameters 1, 2, 2, 3."""
    t3 = TemplateNode("T3", 3, {"e"})
    t2 = TemplateNode("T2", 2, {"c", "d"}, [t3])
    t1 = TemplateNode("T1", 2, {"b"})
    root = TemplateNode("T0", 1, {"a", "f", "g", "i"}, [t1, t2])
    edges = [
        Edge("a", "b"),
        Edge("b", "f"),
        Edge("a", "c"),
        Edge("c", "d"),
        Edge("c", "e"),
        Edge("e", "d"),
        Edge("d", "g"),
        Edge("f", "i"),
        Edge("g", "i"),
    ]
    return ParametricGraphTemplate("abcdefgi", edges, root)


def ex_path(parameter: int = 3) -> ParametricGraphTemplate:
    """``s -> v -> t`` with ``v`` repeated ``parameter`` times."""
    root = TemplateNode("T0", 1, {"s", "t"}, [TemplateNode("T1", parameter, {"v"})])
    return ParametricGraphTemplate(["s", "t", "v"], [Edge("s", "v", 1), Edge("v", "t", 1)], root)


def ex_sib() -> ParametricGraphTemplate:
    """A ring of four ``u`` instances fed by ``s`` and drained into ``t``."""
    root = TemplateNode("T0", 1, {"s", "t"}, [TemplateNode("T1", 4, {"u"})])
    edges = [
        Edge("s", "u", 1),
        Edge("u", "u", 2, CyclicShift(1)),
        Edge("u", "t", 1),
    ]
    return ParametricGraphTemplate(["s", "t", "u"], edges, root)


def ex_in() -> ParametricGraphTemplate:
    """Source in the root, sink inside a loop of three."""
    root = TemplateNode("T0", 1, {"s"}, [TemplateNode("T1", 3, {"u", "t"})])
    return ParametricGraphTemplate(["s", "t", "u"], [Edge("s", "u", 5), Edge("u", "t", 1)], root)


def ex_in2(parameter: int = 2) -> ParametricGraphTemplate:
    """Template-cyclic: instances of ``u`` talk to each other through ``x``."""
    root = TemplateNode("T0", 1, {"s", "x"}, [TemplateNode("T1", parameter, {"u", "t"})])
    edges = [
        Edge("s", "u", 1),
        Edge("u", "x", 1),
        Edge("x", "u", 1),
        Edge("u", "t", 2),
    ]
    return ParametricGraphTemplate(["s", "t", "u", "x"], edges, root)


def random_template(
    rng: random.Random,
    *,
    max_vertices: int = 12,
    max_edges: int = 24,
    max_height: int = 3,
    max_parameter: int = 4,
    max_weight: int = 9,
    max_templates: int = 5,
    siblings: bool = False,
    min_vertices: int = 2,
) -> ParametricGraphTemplate:
    """Draw a valid template.

    Vertices are named ``v0, v1, ...``; templates ``T0`` (root), ``T1``, ...
    Edges respect the no-jumping rule.  With ``siblings=True`` at least one
    sibling edge is placed in a non-root template (when there is one).
    """
    n_templates = rng.randint(1, max_templates)
    parent: dict[str, Optional[str]] = {"T0": None}
    depth = {"T0": 0}
    order = ["T0"]
    for i in range(1, n_templates):
        choices = [t for t in order if depth[t] < max_height]
        p = rng.choice(choices)
        tid = f"T{i}"
        parent[tid] = p
        depth[tid] = depth[p] + 1
        order.append(tid)
    params = {t: (1 if t == "T0" else rng.randint(1, max_parameter)) for t in order}

    n = rng.randint(max(min_vertices, len(order) - 1), max(max_vertices, len(order) - 1))
    names = [f"v{i}" for i in range(n)]
    owner: dict[str, str] = {}
    non_root = order[1:]
    for tid, v in zip(non_root, names):
        owner[v] = tid
    for v in names[len(non_root):]:
        owner[v] = rng.choice(order)

    def neighbours(v):
        t = owner[v]
        return [u for u in names if owner[u] == t or parent.get(owner[u]) == t or parent.get(t) == owner[u]]

    edges: list[Edge] = []
    m = rng.randint(1, max_edges - 3 if siblings else max_edges)
    for _ in range(m):
        u = rng.choice(names)
        w = rng.choice(neighbours(u))
        if u == w:
            continue
        edges.append(Edge(u, w, rng.randint(0, max_weight)))

    if siblings and non_root:
        for _ in range(rng.randint(1, 3)):
            tid = rng.choice(non_root)
            members = [v for v in names if owner[v] == tid]
            u, w = rng.choice(members), rng.choice(members)
            p = params[tid]
            if rng.random() < 0.5:
                spec = CyclicShift(rng.randint(-p, p))
            else:
                perm = list(range(p))
                rng.shuffle(perm)
                spec = Permutation(tuple(perm))
            edges.append(Edge(u, w, rng.randint(0, max_weight), spec))

    nodes: dict[str, TemplateNode] = {}
    for tid in reversed(order):
        kids = [nodes[c] for c in order if parent.get(c) == tid]
        nodes[tid] = TemplateNode(tid, params[tid], {v for v in names if owner[v] == tid}, kids)
    return ParametricGraphTemplate(names, edges, nodes["T0"])


def random_pair(
    rng: random.Random, pgt: ParametricGraphTemplate, *, in_root: bool = False, reachable: bool = False
) -> tuple[str, str]:
    """Two distinct vertices, optionally both owned by the root.

    With ``reachable=True`` the sink is drawn from the vertices reachable
    from the source in the template graph whenever there are any, which
    makes zero flows much rarer.
    """
    pool = [v for v in pgt.vertices if pgt.owner(v) == pgt.root.id] if in_root else list(pgt.vertices)
    s, t = rng.sample(pool, 2)
    if not reachable:
        return s, t
    succ: dict[str, list[str]] = {}
    for e in pgt.edges:
        if e.weight:
            succ.setdefault(e.src, []).append(e.dst)
    for src in rng.sample(pool, len(pool)):
        seen, stack = {src}, [src]
        while stack:
            for y in succ.get(stack.pop(), []):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        hits = sorted(seen.intersection(pool) - {src})
        if hits:
            return src, rng.choice(hits)
    return s, t
