"""Succinct repeated graphs and flow queries that never expand them."""

from .errors import (
    BadAddress,
    InvalidTemplate,
    SizeLimitExceeded,
    SourceEqualsSink,
    TemplateError,
    UnknownTemplate,
    UnknownVertex,
    UnsupportedSiblingSplit,
)
from .flow import (
    FlowResult,
    brute_force_all_st_flow,
    brute_force_single_st_flow,
    max_all_st_flow,
    max_flow,
    max_single_st_flow,
    max_st_flow,
)
from .instantiate import (
    ConcreteGraph,
    contract_infinite_edges,
    export_dot,
    instantiate,
    instantiate_by_rewriting,
    label_isomorphic,
    merge_vertex_instances,
)
from .template import (
    CyclicShift,
    Edge,
    ParametricGraphTemplate,
    Permutation,
    TemplateNode,
    Violation,
    boundary_vertices,
    instantiation_size,
    is_template_acyclic,
    lca_template,
    template_of,
    tree_height,
    validate,
)
from .transforms import edge_reweight, instance_merge, partial_instantiate_upwards
from .weights import INF

__version__ = "0.1.0"
