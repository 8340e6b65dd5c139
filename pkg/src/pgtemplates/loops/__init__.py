"""Nested parallel-loop programs encoded as typed templates."""

from .builders import build_cross_correlation, build_indexed_read, build_matmul, build_racy_write
from .interpreter import ExecutionReport, InputShapeMismatch, detect_races, interpret
from .movement import assign_dataflow_weights, data_movement_bound
from .program import (
    COPY,
    PARFOR,
    PASS,
    READ,
    WRITE,
    Kind,
    LoopProgram,
    binop,
    const,
    memory,
    reduce_,
    validate_program,
)
