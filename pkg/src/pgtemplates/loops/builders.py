"""Ready-made loop programs."""

from __future__ import annotations

from ..template import Edge, ParametricGraphTemplate, TemplateNode
from .program import COPY, PARFOR, PASS, READ, WRITE, LoopProgram, binop, const, memory, reduce_


def _assemble(kinds: dict, owner: dict, tree: list, edges: list) -> LoopProgram:
    """``tree`` is a list of ``(template id, parameter, parent id)`` in pre-order."""
    owned: dict = {}
    for v, t in owner.items():
        owned.setdefault(t, set()).add(v)
    nodes = {}
    for tid, p, parent in reversed(tree):
        kids = [nodes[c] for c, _, par in tree if par == tid]
        nodes[tid] = TemplateNode(tid, p, owned.get(tid, set()), kids)
    root = tree[0][0]
    pgt = ParametricGraphTemplate(list(kinds), [Edge(s, d, 1, None, r) for s, d, r in edges], nodes[root])
    return LoopProgram(pgt, kinds)


def build_matmul(n: int, k: int, m: int) -> LoopProgram:
    """``B = A1 @ A2`` for an ``n x k`` and a ``k x m`` matrix.

    Loops over ``i < n`` and ``j < m`` are parallel; the inner loop over
    ``k`` feeds a sum reduction whose result is written to ``B[i][j]``.
    """
    if min(n, k, m) < 1:
        raise ValueError("matrix sizes must be positive")
    kinds = {
        "A1": memory("input", n, k), "A2": memory("input", k, m), "B": memory("output", n, m),
        "pi": PARFOR,
        "ci": COPY, "pj": PARFOR, "pa1": PASS, "pb1": PASS, "pw": PASS,
        "cj": COPY, "ci2": COPY, "pk": PARFOR, "red": reduce_("+"), "wr": WRITE, "pa2": PASS, "pb2": PASS,
        "ck": COPY, "ci3": COPY, "cj3": COPY, "rd1": READ, "rd2": READ, "mul": binop("*"),
    }
    owner = {
        "A1": "T0", "A2": "T0", "B": "T0", "pi": "T0",
        "ci": "Ti", "pj": "Ti", "pa1": "Ti", "pb1": "Ti", "pw": "Ti",
        "cj": "Tj", "ci2": "Tj", "pk": "Tj", "red": "Tj", "wr": "Tj", "pa2": "Tj", "pb2": "Tj",
        "ck": "Tk", "ci3": "Tk", "cj3": "Tk", "rd1": "Tk", "rd2": "Tk", "mul": "Tk",
    }
    tree = [("T0", 1, None), ("Ti", n, "T0"), ("Tj", m, "Ti"), ("Tk", k, "Tj")]
    edges = [
        ("pi", "ci", None), ("pj", "cj", None), ("pk", "ck", None),
        ("ci", "ci2", None), ("ci2", "ci3", None), ("cj", "cj3", None),
        ("A1", "pa1", None), ("pa1", "pa2", None), ("pa2", "rd1", 0),
        ("ci3", "rd1", 1), ("ck", "rd1", 2),
        ("A2", "pb1", None), ("pb1", "pb2", None), ("pb2", "rd2", 0),
        ("ck", "rd2", 1), ("cj3", "rd2", 2),
        ("rd1", "mul", 0), ("rd2", "mul", 1),
        ("mul", "red", None),
        ("red", "wr", 0), ("ci2", "wr", 1), ("cj", "wr", 2),
        ("wr", "pw", None), ("pw", "B", None),
    ]
    return _assemble(kinds, owner, tree, edges)


def build_cross_correlation(n: int, k: int) -> LoopProgram:
    """``B[i] = sum_j A1[i + j] * A2[j]`` for ``i < n - k + 1`` and ``j < k``."""
    if n < 1 or k < 1:
        raise ValueError("array sizes must be positive")
    if k > n:
        raise ValueError("kernel longer than the signal")
    out = n - k + 1
    kinds = {
        "A1": memory("input", n), "A2": memory("input", k), "B": memory("output", out),
        "pi": PARFOR,
        "ci": COPY, "pj": PARFOR, "red": reduce_("+"), "wr": WRITE, "pa": PASS, "pb": PASS,
        "cj": COPY, "ci2": COPY, "add": binop("+"), "rd1": READ, "rd2": READ, "mul": binop("*"),
    }
    owner = {
        "A1": "T0", "A2": "T0", "B": "T0", "pi": "T0",
        "ci": "Ti", "pj": "Ti", "red": "Ti", "wr": "Ti", "pa": "Ti", "pb": "Ti",
        "cj": "Tj", "ci2": "Tj", "add": "Tj", "rd1": "Tj", "rd2": "Tj", "mul": "Tj",
    }
    tree = [("T0", 1, None), ("Ti", out, "T0"), ("Tj", k, "Ti")]
    edges = [
        ("pi", "ci", None), ("pj", "cj", None), ("ci", "ci2", None),
        ("ci2", "add", 0), ("cj", "add", 1),
        ("A1", "pa", None), ("pa", "rd1", 0), ("add", "rd1", 1),
        ("A2", "pb", None), ("pb", "rd2", 0), ("cj", "rd2", 1),
        ("rd1", "mul", 0), ("rd2", "mul", 1),
        ("mul", "red", None),
        ("red", "wr", 0), ("ci", "wr", 1),
        ("wr", "B", None),
    ]
    return _assemble(kinds, owner, tree, edges)


def build_racy_write(parameter: int = 2) -> LoopProgram:
    """Every iteration of a parallel loop writes its index into ``B[0]``."""
    kinds = {"B": memory("output", 1), "p": PARFOR, "c": COPY, "zero": const(0), "w": WRITE}
    owner = {"B": "T0", "p": "T0", "c": "T1", "zero": "T1", "w": "T1"}
    tree = [("T0", 1, None), ("T1", parameter, "T0")]
    edges = [("p", "c", None), ("c", "w", 0), ("zero", "w", 1), ("w", "B", None)]
    return _assemble(kinds, owner, tree, edges)


def build_indexed_read(index: int, size: int = 2) -> LoopProgram:
    """Copy ``A1[index]`` into ``B[0]``; out of bounds unless ``index < size``."""
    kinds = {
        "A1": memory("input", size), "B": memory("output", 1),
        "idx": const(index), "zero": const(0), "rd": READ, "w": WRITE,
    }
    owner = {v: "T0" for v in kinds}
    tree = [("T0", 1, None)]
    edges = [("A1", "rd", 0), ("idx", "rd", 1), ("rd", "w", 0), ("zero", "w", 1), ("w", "B", None)]
    return _assemble(kinds, owner, tree, edges)
