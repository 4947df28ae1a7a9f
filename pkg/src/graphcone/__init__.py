"""Exact arithmetic on the graded cone of a trivalent graph."""
from .cone import (
    ConeElement,
    LocalTriple,
    cone_violations,
    deg_min,
    deg_v,
    format_element,
    in_cone,
    in_lattice,
    lift_cut,
    local_paths,
    parse_element,
    project,
)
from .decompose import Decomposition, decompose, split_degree2
from .errors import BudgetExceeded, ConeError, GraphConeError, GraphError, GraphParseError, SeriesError
from .fixtures import FIXTURES, load_fixture
from .generators import GeneratorSet, minimal_generators, verify_relation
from .graph import (
    GraphInvariants,
    Network,
    TrivalentGraph,
    classify_edges,
    cut_edge,
    disjoint_union,
    enumerate_networks,
    format_graph,
    glue_leaves,
    graft,
    invariants,
    load_graph,
    parse_graph,
)
from .hilbert import (
    CI_PRESENTATIONS,
    HilbertTable,
    balloon_star,
    balloon_table,
    ci_series,
    hilbert_brute,
    hilbert_compose,
    hilbert_glue,
    hilbert_graft,
    hilbert_product,
    tripod_table,
    verify_mutation_invariance,
)
from .iso import find_isomorphism, is_isomorphic
from .lattice_points import count_points, points_of_degree
from .mutation import MutationStep, caterpillar_normal_form, inverse_step, mutate, replay

__version__ = "0.1.0"

import types as _types

__all__ = [k for k, v in dict(globals()).items() if not k.startswith("_") and not isinstance(v, _types.ModuleType)]
