"""Command-line entry point.

Exit codes: 0 success, 1 validation failure or oracle mismatch, 2 size limit
exceeded, 3 undefined execution or other runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import io
from .errors import InvalidTemplate, SizeLimitExceeded, TemplateError
from .flow import (
    brute_force_all_st_flow,
    brute_force_single_st_flow,
    max_all_st_flow,
    max_single_st_flow,
)
from .instantiate import DEFAULT_LIMIT, concrete_to_dict, export_dot, instantiate, parse_vertex_ref
from .loops import (
    assign_dataflow_weights,
    build_cross_correlation,
    build_matmul,
    data_movement_bound,
    interpret,
    validate_program,
)
from .template import instantiation_size, is_template_acyclic, tree_height, validate
from .transforms import edge_reweight, instance_merge, partial_instantiate_upwards
from .weights import format_weight

OK, FAILED, LIMIT, RUNTIME = 0, 1, 2, 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> io.Document:
    return io.parse(_read_text(path))


def _violations(doc: io.Document) -> list:
    if doc.kinds is not None:
        return validate_program(doc.program)
    return validate(doc.pgt)


def _require_valid(doc: io.Document) -> None:
    found = _violations(doc)
    if found:
        raise InvalidTemplate(found)


def _emit_json(data) -> None:
    sys.stdout.write(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _value(x) -> str:
    """Exact rational as text: ``19`` or ``3/2``."""
    return str(x)


def _nested(fn, data):
    if isinstance(data, list):
        return [_nested(fn, x) for x in data]
    return fn(data)


# --- subcommands ------------------------------------------------------------


def cmd_validate(args) -> int:
    found = _violations(_load(args.file))
    if not found:
        print("OK")
        return OK
    for v in found:
        print(v)
    return FAILED


def cmd_info(args) -> int:
    doc = _load(args.file)
    _require_valid(doc)
    pgt = doc.pgt
    n_inst, m_inst = instantiation_size(pgt)
    acyclic, witness = is_template_acyclic(pgt)
    rows = [
        ("vertices", len(pgt.vertices)),
        ("edges", len(pgt.edges)),
        ("sibling_edges", sum(e.sibling is not None for e in pgt.edges)),
        ("templates", len(pgt.template_ids())),
        ("height", tree_height(pgt)),
        ("template_acyclic", "yes" if acyclic else "no"),
    ]
    if witness:
        rows.append(("template_cycle", " ".join(witness)))
    rows += [("instance_vertices", n_inst), ("instance_edges", m_inst)]
    for key, val in rows:
        print(f"{key}: {val}")
    return OK


def cmd_instantiate(args) -> int:
    doc = _load(args.file)
    _require_valid(doc)
    g = instantiate(doc.pgt, args.limit)
    if args.format == "dot":
        sys.stdout.write(export_dot(g))
    else:
        _emit_json(concrete_to_dict(g))
    return OK


def cmd_flow(args) -> int:
    doc = _load(args.file)
    _require_valid(doc)
    pgt = doc.pgt
    s, addr_s = parse_vertex_ref(args.source)
    t, addr_t = parse_vertex_ref(args.sink)
    if args.mode == "all":
        if addr_s or addr_t:
            raise TemplateError("all-s-t flow takes bare vertex names, not instance addresses")
        res = max_all_st_flow(pgt, s, t)
    else:
        res = max_single_st_flow(pgt, s, addr_s, t, addr_t)
    print(format_weight(res.value))
    if args.cut:
        print("source side: " + " ".join(sorted(res.source_side)))
    if not args.oracle:
        return OK
    if args.mode == "all":
        ref = brute_force_all_st_flow(pgt, s, t, args.limit)
    else:
        ref = brute_force_single_st_flow(pgt, s, addr_s, t, addr_t, args.limit)
    if ref.value == res.value:
        print("MATCH")
        return OK
    print(f"MISMATCH oracle={format_weight(ref.value)}")
    return FAILED


def cmd_loop_example(args) -> int:
    if args.name == "matmul":
        sizes = args.sizes or [2, 2, 2]
        if len(sizes) != 3:
            raise TemplateError("matmul takes three sizes: n k m")
        lp = build_matmul(*sizes)
    else:
        sizes = args.sizes or [3, 2]
        if len(sizes) != 2:
            raise TemplateError("xcorr takes two sizes: n k")
        lp = build_cross_correlation(*sizes)
    sys.stdout.write(io.serialize(lp))
    return OK


def _program_and_inputs(args):
    doc = _load(args.file)
    _require_valid(doc)
    inputs = json.loads(_read_text(args.inputs)) if args.inputs else {}
    if not isinstance(inputs, dict):
        raise TemplateError("inputs must be a JSON object mapping array names to nested lists")
    return doc.program, inputs


def cmd_loop_run(args) -> int:
    lp, inputs = _program_and_inputs(args)
    report = interpret(lp, inputs, limit=args.limit, reverse=args.reverse)
    if report.undefined:
        print(f"undefined: {report.undefined}: {report.detail}")
        return RUNTIME
    _emit_json({name: _nested(_value, arr) for name, arr in report.outputs.items()})
    return OK


def cmd_loop_races(args) -> int:
    lp, inputs = _program_and_inputs(args)
    report = interpret(lp, inputs, limit=args.limit)
    for w1, w2, arr, idx in report.races:
        print(f"{w1} {w2} {arr}[{','.join(map(str, idx))}]")
    print(f"races: {len(report.races)}")
    if report.undefined:
        print(f"undefined: {report.undefined}: {report.detail}")
        return RUNTIME
    return OK


def cmd_loop_bound(args) -> int:
    doc = _load(args.file)
    _require_valid(doc)
    s, addr_s = parse_vertex_ref(args.source)
    t, addr_t = parse_vertex_ref(args.sink)
    value = data_movement_bound(doc.program, s, t, mode=args.mode, addr_s=addr_s, addr_t=addr_t)
    print(format_weight(value))
    if args.oracle:
        weighted = assign_dataflow_weights(doc.program)
        if args.mode == "all":
            ref = brute_force_all_st_flow(weighted, s, t, args.limit).value
        else:
            ref = brute_force_single_st_flow(weighted, s, addr_s, t, addr_t, args.limit).value
        if ref != value:
            print(f"MISMATCH oracle={format_weight(ref)}")
            return FAILED
        print("MATCH")
    return OK


def cmd_transform(args) -> int:
    doc = _load(args.file)
    _require_valid(doc)
    pgt = doc.pgt
    if args.op == "reweight":
        g = edge_reweight(pgt)
        edges = [
            {"src": e.src, "dst": e.dst, "weight": format_weight(e.weight), "origin": e.origin}
            for e in sorted(g.edges, key=lambda e: (e.src, e.dst, e.origin))
        ]
        _emit_json({"vertices": sorted(g.vertex_ids()), "edges": edges})
        return OK
    if not args.vertex:
        raise TemplateError(f"transform {args.op} needs --vertex")
    if args.op == "merge":
        out, _ = instance_merge(pgt, args.vertex)
    else:
        addr = tuple(int(p) for p in args.addr.split(".")) if args.addr else ()
        out = partial_instantiate_upwards(pgt, args.vertex, addr).pgt
    kinds = None
    if doc.kinds is not None:
        # copies made by partial instantiation are named ``base~k``
        kinds = {v: doc.kinds[v.split("~")[0]] for v in out.vertices if v.split("~")[0] in doc.kinds}
    sys.stdout.write(io.serialize(out, kinds))
    return OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pgt", description="Parametric graph templates: validate, expand, transform, solve.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="template document (JSON), '-' for stdin")
        sp.set_defaults(fn=fn)
        return sp

    def with_limit(sp):
        sp.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="max instance vertices + edges")

    with_file("validate", cmd_validate, "check a document against every well-formedness rule")
    with_file("info", cmd_info, "sizes, height and template-acyclicity")
    sp = with_file("instantiate", cmd_instantiate, "expand into the flat graph")
    sp.add_argument("--format", choices=("dot", "json"), default="json")
    with_limit(sp)

    sp = with_file("flow", cmd_flow, "maximum flow without expanding")
    sp.add_argument("--mode", choices=("all", "single"), default="all")
    sp.add_argument("--source", required=True, help="NAME or NAME@i0.i1")
    sp.add_argument("--sink", required=True, help="NAME or NAME@i0.i1")
    sp.add_argument("--oracle", action="store_true", help="also solve on the expansion and compare")
    sp.add_argument("--cut", action="store_true", help="print the source side of a minimum cut")
    with_limit(sp)

    loop = sub.add_parser("loop", help="parallel loop programs")
    lsub = loop.add_subparsers(dest="loop_command", required=True)
    sp = lsub.add_parser("example", help="print a built-in program")
    sp.add_argument("name", choices=("matmul", "xcorr"))
    sp.add_argument("sizes", nargs="*", type=int, help="matmul: n k m, xcorr: n k")
    sp.set_defaults(fn=cmd_loop_example)
    for name, fn, text in (("run", cmd_loop_run, "execute serially"), ("races", cmd_loop_races, "report data races")):
        sp = lsub.add_parser(name, help=text)
        sp.add_argument("file")
        sp.add_argument("--inputs", help="JSON object of input arrays")
        with_limit(sp)
        sp.set_defaults(fn=fn)
    lsub.choices["run"].add_argument("--reverse", action="store_true", help="use the reverse canonical schedule")
    sp = lsub.add_parser("bound", help="data-movement upper bound between two vertices")
    sp.add_argument("file")
    sp.add_argument("--source", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--mode", choices=("all", "single"), default="all")
    sp.add_argument("--oracle", action="store_true")
    with_limit(sp)
    sp.set_defaults(fn=cmd_loop_bound)

    sp = with_file("transform", cmd_transform, "edge reweighting, instance merging, partial instantiation")
    sp.add_argument("op", choices=("reweight", "merge", "partial"))
    sp.add_argument("--vertex")
    sp.add_argument("--addr", default="", help="instance address i0.i1 for partial")
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except io.DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except InvalidTemplate as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        return FAILED
    except SizeLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return LIMIT
    except (TemplateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME


if __name__ == "__main__":
    sys.exit(main())
