"""Typed vertices for parallel loop programs and the well-formedness rules."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..template import ParametricGraphTemplate, Violation, validate

MEMORY_ROLES = ("input", "output", "temp")
REDUCE_OPS = ("+", "*")
BINARY_OPS = ("+", "-", "*", "/")


@dataclass(frozen=True)
class Kind:
    """What a vertex does.

    ``name`` is one of ``input``, ``output``, ``temp`` (memory), ``parfor``,
    ``reduce``, ``copy``, ``pass``, ``read``, ``write``, ``binop``, ``const``.
    """

    name: str
    op: Optional[str] = None
    value: Optional[Fraction] = None
    sizes: tuple = ()

    @property
    def is_memory(self) -> bool:
        return self.name in MEMORY_ROLES

    @property
    def dims(self) -> int:
        return len(self.sizes)

    def __str__(self) -> str:
        if self.name == "reduce":
            return f"reduce({self.op})"
        if self.name == "binop":
            return f"op({self.op})"
        if self.name == "const":
            return f"const({self.value})"
        return self.name

    @classmethod
    def parse(cls, text: str, sizes=()) -> "Kind":
        m = re.fullmatch(r"(reduce|op|const)\((.+)\)", text)
        if m:
            head, arg = m.groups()
            if head == "reduce":
                return cls("reduce", op=arg)
            if head == "op":
                return cls("binop", op=arg)
            return cls("const", value=Fraction(arg))
        if text not in MEMORY_ROLES + ("parfor", "copy", "pass", "read", "write"):
            raise ValueError(f"unknown vertex kind {text!r}")
        return cls(text, sizes=tuple(sizes))


def memory(role: str, *sizes: int) -> Kind:
    return Kind(role, sizes=tuple(sizes))


PARFOR = Kind("parfor")
COPY = Kind("copy")
PASS = Kind("pass")
READ = Kind("read")
WRITE = Kind("write")


def reduce_(op: str) -> Kind:
    return Kind("reduce", op=op)


def binop(op: str) -> Kind:
    return Kind("binop", op=op)


def const(value) -> Kind:
    return Kind("const", value=Fraction(value))


@dataclass(frozen=True)
class LoopProgram:
    pgt: ParametricGraphTemplate
    kinds: dict = field(default_factory=dict)

    def kind(self, v: str) -> Kind:
        return self.kinds[v]

    def memories(self, role: Optional[str] = None) -> list[str]:
        return [
            v for v in self.pgt.vertices
            if self.kinds[v].is_memory and (role is None or self.kinds[v].name == role)
        ]


def _cyclic(pgt: ParametricGraphTemplate) -> bool:
    succ = defaultdict(list)
    indeg = {v: 0 for v in pgt.vertices}
    for e in pgt.edges:
        succ[e.src].append(e.dst)
        indeg[e.dst] += 1
    ready = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen != len(pgt.vertices)


def validate_program(lp: LoopProgram) -> list[Violation]:
    """Template rules plus the syntax rules for every vertex kind."""
    pgt = lp.pgt
    out = list(validate(pgt))
    if out:
        return out
    missing = [v for v in pgt.vertices if v not in lp.kinds]
    for v in missing:
        out.append(Violation("KindMissing", v, "vertex has no kind"))
    if missing:
        return out

    ins = defaultdict(list)
    outs = defaultdict(list)
    for e in pgt.edges:
        ins[e.dst].append(e)
        outs[e.src].append(e)
        if e.sibling is not None:
            out.append(Violation("Sibling", f"{e.src}->{e.dst}", "loop programs have no sibling edges"))

    def kind(v):
        return lp.kinds[v]

    def mem(v):
        return kind(v).is_memory

    def parent_of(v):
        return pgt.parent(pgt.owner(v))

    def chain_reaches_memory(v, forward):
        # follow pass-through vertices until something else shows up
        seen = set()
        while kind(v).name == "pass" and v not in seen:
            seen.add(v)
            nxt = outs[v] if forward else ins[v]
            if len(nxt) != 1:
                return False
            v = nxt[0].dst if forward else nxt[0].src
        return mem(v)

    def bad(rule, v, msg):
        out.append(Violation(rule, v, msg))

    for v in pgt.vertices:
        k = kind(v)
        i, o = ins[v], outs[v]
        if k.is_memory:
            if pgt.owner(v) != pgt.root.id:
                bad("MemoryInRoot", v, "memory vertices belong to the root template")
            if not k.sizes or any(not isinstance(s, int) or s < 1 for s in k.sizes):
                bad("MemoryShape", v, f"sizes must be positive integers, got {k.sizes!r}")
            continue
        if len(i) >= 2:
            ranks = sorted(e.rank if e.rank is not None else -1 for e in i)
            if ranks != list(range(len(i))) and k.name != "reduce":
                bad("InputOrder", v, "input edges must carry ranks 0..d-1")
        if k.name != "copy" and len(o) != 1:
            bad("OutDegree", v, f"{k} vertices have exactly one output edge")
            continue
        by_rank = sorted(i, key=lambda e: -1 if e.rank is None else e.rank)
        if k.name == "parfor":
            if i:
                bad("ParforInput", v, "parfor has no input edge")
            if parent_of(o[0].dst) != pgt.owner(v):
                bad("ParforOutput", v, "parfor output must lead into a child template")
        elif k.name == "reduce":
            if k.op not in REDUCE_OPS:
                bad("ReduceOp", v, f"reduce supports {REDUCE_OPS}, got {k.op!r}")
            if len(i) != 1 or parent_of(i[0].src) != pgt.owner(v):
                bad("ReduceInput", v, "reduce has a single input from a child template")
            if mem(o[0].dst):
                bad("ReduceOutput", v, "reduce output must not be a memory vertex")
        elif k.name == "copy":
            if len(i) != 1:
                bad("CopyInput", v, "copy has exactly one input")
            for e in o:
                if mem(e.dst) or pgt.parent(pgt.owner(v)) == pgt.owner(e.dst):
                    bad("CopyOutput", v, f"copy output to {e.dst!r} goes to memory or to the parent template")
        elif k.name == "pass":
            if len(i) != 1:
                bad("PassDegree", v, "pass-through has in- and out-degree 1")
            elif mem(i[0].src) and mem(o[0].dst):
                bad("PassMemory", v, "at most one neighbour of a pass-through is memory")
        elif k.name == "read":
            if len(i) < 2:
                bad("ReadInput", v, "read needs an array input and at least one index")
            else:
                src = by_rank[0].src
                if not (mem(src) or kind(src).name == "pass") or not chain_reaches_memory(src, False):
                    bad("ReadSource", v, "first input must come from memory through pass-throughs")
                if any(mem(e.src) for e in by_rank[1:]):
                    bad("ReadIndex", v, "index inputs must not be memory")
            if mem(o[0].dst):
                bad("ReadOutput", v, "read output must not be memory")
        elif k.name == "write":
            if len(i) < 2 or any(mem(e.src) for e in i):
                bad("WriteInput", v, "write needs two or more non-memory inputs")
            dst = o[0].dst
            if not (mem(dst) or kind(dst).name == "pass") or not chain_reaches_memory(dst, True):
                bad("WriteOutput", v, "output must lead to memory through pass-throughs")
        elif k.name == "binop":
            if k.op not in BINARY_OPS:
                bad("BinOp", v, f"unknown operator {k.op!r}")
            if len(i) != 2:
                bad("OpDegree", v, "binary operators have in-degree 2")
            if any(mem(e.src) for e in i) or mem(o[0].dst):
                bad("OpMemory", v, "operators do not touch memory")
        elif k.name == "const":
            if i:
                bad("OpDegree", v, "constants have in-degree 0")
            if mem(o[0].dst):
                bad("OpMemory", v, "operators do not touch memory")
    if _cyclic(pgt):
        out.append(Violation("Cyclic", pgt.root.id, "template graph must be acyclic"))
    return out
