"""Exact computations on resolution graphs of minimally elliptic surface singularities."""

from .classes import (
    Cu,
    CyclicQuotient,
    Dolgachev,
    El,
    No,
    Pi,
    SingularityClass,
    T,
    Ta,
    Tr,
    classify_graph,
    degree,
    graph_of,
    parse_class,
    predicates,
)
from .deform import Move, adjacency_dag, check_balance, constant_moves, lowering_moves, reach
from .graph import (
    Cycle,
    DualGraph,
    Vertex,
    chi,
    fundamental_cycle,
    intersection_matrix,
    is_minimally_elliptic,
    is_negative_definite,
    parse_graph,
    self_intersection,
)
from .hj import HJExpansion, hj_eval, hj_expand, recognize_wahl

__version__ = "0.1.0"
