"""Serial execution of loop programs on their instantiation."""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from ..errors import InvalidTemplate, TemplateError
from ..instantiate import DEFAULT_LIMIT, instantiate
from ..transforms import edge_reweight
from ..weights import INF
from .movement import assign_dataflow_weights
from .program import LoopProgram, validate_program


class InputShapeMismatch(TemplateError, ValueError):
    pass


class _Undefined(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


@dataclass
class ExecutionReport:
    outputs: Optional[dict]  # None when the execution is undefined
    races: list = field(default_factory=list)
    undefined: Optional[str] = None
    detail: str = ""
    movement_weight_total: int = 0


def _to_value(x) -> Fraction:
    if isinstance(x, bool):
        raise InputShapeMismatch(f"booleans are not array values: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise InputShapeMismatch(f"not an exact number: {x!r}") from None
    raise InputShapeMismatch(f"array values must be integers, Fractions or decimal strings, got {x!r}")


def _flatten(name: str, data, sizes: tuple) -> dict:
    out = {}

    def walk(node, prefix, depth):
        if depth == len(sizes):
            out[prefix] = _to_value(node)
            return
        if not isinstance(node, (list, tuple)) or len(node) != sizes[depth]:
            raise InputShapeMismatch(f"{name}: expected length {sizes[depth]} at depth {depth}")
        for i, child in enumerate(node):
            walk(child, prefix + (i,), depth + 1)

    walk(data, (), 0)
    return out


def _nest(values: dict, sizes: tuple):
    if not sizes:
        return values[()]

    def build(prefix, depth):
        if depth == len(sizes):
            return values[prefix]
        return [build(prefix + (i,), depth + 1) for i in range(sizes[depth])]

    return build((), 0)


def _execution_graph(lp: LoopProgram, limit):
    """Instantiate and contract pass-through vertices.

    Returns ``(graph, inputs)``: ``graph`` maps each remaining concrete
    vertex to its successors, ``inputs`` maps it to ``[(rank, source), ...]``.
    """
    g = instantiate(lp.pgt, limit)
    kind = {v.id: lp.kinds[v.origin] for v in g.vertices}
    is_pass = {vid for vid, k in kind.items() if k.name == "pass"}
    pass_out = defaultdict(list)
    for e in g.edges:
        if e.src in is_pass:
            pass_out[e.src].append((e.dst, lp.pgt.edges[e.origin].rank))

    succ: dict[str, list[str]] = {vid: [] for vid in kind if vid not in is_pass}
    inputs: dict[str, list] = {vid: [] for vid in succ}
    for e in g.edges:
        if e.src in is_pass:
            continue
        targets = [(e.dst, lp.pgt.edges[e.origin].rank)]
        while any(t in is_pass for t, _ in targets):
            nxt = []
            for t, r in targets:
                nxt.extend(pass_out[t] if t in is_pass else [(t, r)])
            targets = nxt
        for t, r in targets:
            succ[e.src].append(t)
            inputs[t].append((r, e.src))
    return g, kind, succ, inputs


def _topological(succ: dict, reverse: bool) -> list[str]:
    names = sorted(succ)
    rank = {v: (-i if reverse else i) for i, v in enumerate(names)}
    indeg = {v: 0 for v in succ}
    for v in succ:
        for w in succ[v]:
            indeg[w] += 1
    heap = [(rank[v], v) for v in succ if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (rank[w], w))
    return order


def _index(values, arr: str, sizes: tuple, where: str) -> tuple:
    if len(values) != len(sizes):
        raise _Undefined("DimensionMismatch", f"{where}: {arr} has {len(sizes)} dimensions, got {len(values)} indices")
    idx = []
    for x in values:
        if x.denominator != 1:
            raise _Undefined("NonIntegralIndex", f"{where}: index {x} into {arr}")
        idx.append(int(x))
    if any(not 0 <= i < s for i, s in zip(idx, sizes)):
        raise _Undefined("OutOfBounds", f"{where}: {arr}{list(idx)} outside {list(sizes)}")
    return tuple(idx)


def interpret(
    lp: LoopProgram,
    inputs: dict,
    *,
    limit: Optional[int] = DEFAULT_LIMIT,
    reverse: bool = False,
) -> ExecutionReport:
    """Run one serial execution and report outputs, races and definedness.

    The schedule is the topological order of the instantiation (after
    contracting pass-through vertices) that always picks the smallest ready
    vertex id, or the largest one with ``reverse=True``.  A parallel loop
    hands index ``j`` to its child instance ``j``.
    """
    violations = validate_program(lp)
    if violations:
        raise InvalidTemplate(violations)
    arrays: dict[str, dict] = {}
    for name in lp.memories():
        k = lp.kinds[name]
        if k.name == "input":
            if name not in inputs:
                raise InputShapeMismatch(f"missing input array {name!r}")
            arrays[name] = _flatten(name, inputs[name], k.sizes)
        else:
            arrays[name] = {idx: Fraction(0) for idx in product(*(range(s) for s in k.sizes))}
    unknown = set(inputs) - set(lp.memories("input"))
    if unknown:
        raise InputShapeMismatch(f"unexpected input arrays {sorted(unknown)}")

    g, kind, succ, ins = _execution_graph(lp, limit)
    order = _topological(succ, reverse)
    value: dict[str, Fraction] = {}
    writes: list[tuple[str, str, tuple]] = []

    def arg(v, src):
        if kind[src].name == "parfor":
            return Fraction(g.vertex(v).address[len(g.vertex(src).address)])
        return value[src]

    report = ExecutionReport(outputs=None)
    try:
        for v in order:
            k = kind[v]
            if k.is_memory:
                continue
            args = sorted(ins[v], key=lambda p: (-1 if p[0] is None else p[0], p[1]))
            if k.name == "parfor":
                continue
            if k.name == "const":
                value[v] = k.value
            elif k.name == "copy":
                value[v] = arg(v, args[0][1])
            elif k.name == "reduce":
                acc = None
                for _, src in args:
                    x = arg(v, src)
                    acc = x if acc is None else (acc + x if k.op == "+" else acc * x)
                value[v] = acc
            elif k.name == "binop":
                x, y = arg(v, args[0][1]), arg(v, args[1][1])
                if k.op == "+":
                    value[v] = x + y
                elif k.op == "-":
                    value[v] = x - y
                elif k.op == "*":
                    value[v] = x * y
                else:
                    if y == 0:
                        raise _Undefined("DivisionByZero", f"{v}: {x} / 0")
                    value[v] = x / y
            elif k.name == "read":
                arr = g.vertex(args[0][1]).origin
                idx = _index([arg(v, s) for _, s in args[1:]], arr, lp.kinds[arr].sizes, v)
                value[v] = arrays[arr][idx]
            elif k.name == "write":
                (target,) = succ[v]
                arr = g.vertex(target).origin
                idx = _index([arg(v, s) for _, s in args[1:]], arr, lp.kinds[arr].sizes, v)
                x = arg(v, args[0][1])
                arrays[arr][idx] = x
                value[v] = x
                writes.append((v, arr, idx))
    except _Undefined as exc:
        report.undefined = exc.code
        report.detail = exc.detail
    else:
        report.outputs = {
            name: _nest(arrays[name], lp.kinds[name].sizes) for name in lp.memories("output")
        }
    report.races = _races(succ, writes)
    weights = edge_reweight(assign_dataflow_weights(lp)).edges
    report.movement_weight_total = sum(e.weight for e in weights if e.weight is not INF)
    return report


def _races(succ: dict, writes: list) -> list[tuple]:
    """Pairs of writes to one array cell with no path between them."""
    groups = defaultdict(list)
    for w, arr, idx in writes:
        groups[(arr, idx)].append(w)
    reach_cache: dict[str, set] = {}

    def reach(v):
        if v not in reach_cache:
            seen, stack = set(), [v]
            while stack:
                x = stack.pop()
                for y in succ[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            reach_cache[v] = seen
        return reach_cache[v]

    out = []
    for (arr, idx), ws in sorted(groups.items()):
        ws = sorted(ws)
        for i, a in enumerate(ws):
            for b in ws[i + 1 :]:
                if b not in reach(a) and a not in reach(b):
                    out.append((a, b, arr, idx))
    return out


def detect_races(lp: LoopProgram, inputs: dict, *, limit: Optional[int] = DEFAULT_LIMIT) -> list[tuple]:
    return interpret(lp, inputs, limit=limit).races
