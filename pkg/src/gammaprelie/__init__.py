"""Rooted-tree (PreLie) operad, its divided-symmetry algebras and corolla operations."""

from .brace import (
    PlanarTree,
    brace_op,
    gamma_element_to_brace,
    gamma_to_brace,
    oracle_compare,
    parse_planar,
    shuffles,
)
from .coeffring import QQ, ZZ, Element, NonIntegralError, Ring, RingMismatchError, Zmod
from .cor import (
    CorNode,
    Gen,
    LinComb,
    apply_rel7,
    cor_expr,
    from_tree,
    normalize,
    parse_cor,
    reduce,
    rel7_raw_terms,
    verify_relations,
)
from .gamma import (
    gamma_compose,
    has_p_fold_branch,
    ker_generator_reduce,
    ker_trace_predicate,
    kernel_basis,
    lambda_project,
    orb_expand,
    p_restricted_defect,
    trace,
    trace_inverse,
)
from .prelie_operad import compose_labelled, compose_partial, compose_total, left_comb, prelie_bracket
from .trees import (
    LabelledTree,
    Tree,
    corolla_labelled,
    enumerate_decorated,
    enumerate_labelled,
    germ,
    lambda_count,
    normal_form,
    parse_tree,
    stab_order,
)

__version__ = "0.1.0"
