"""Data-movement upper bounds from flows on loop programs."""

from __future__ import annotations

from dataclasses import replace
from typing import Optional

from ..errors import InvalidTemplate
from ..flow import max_all_st_flow, max_single_st_flow
from ..template import ParametricGraphTemplate
from ..weights import Weight
from .program import LoopProgram, validate_program


def assign_dataflow_weights(lp: LoopProgram) -> ParametricGraphTemplate:
    """Copy of the template with weight 0 on parfor outputs and 1 elsewhere.

    Loop indices cost nothing to move; every other edge carries one value.
    """
    pgt = lp.pgt
    edges = [replace(e, weight=0 if lp.kinds[e.src].name == "parfor" else 1) for e in pgt.edges]
    return ParametricGraphTemplate(list(pgt.vertices), edges, pgt.root, pgt.dummies)


def data_movement_bound(
    lp: LoopProgram,
    s: str,
    t: str,
    *,
    mode: str = "all",
    addr_s: Optional[tuple] = None,
    addr_t: Optional[tuple] = None,
) -> Weight:
    """Upper bound on the values moved when ``s`` and ``t`` run on different processors."""
    violations = validate_program(lp)
    if violations:
        raise InvalidTemplate(violations)
    pgt = assign_dataflow_weights(lp)
    if mode == "all":
        return max_all_st_flow(pgt, s, t).value
    if mode == "single":
        return max_single_st_flow(pgt, s, addr_s or (), t, addr_t or ()).value
    raise ValueError(f"mode must be 'all' or 'single', got {mode!r}")
