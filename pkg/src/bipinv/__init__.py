"""Exact inverses of bipartite graphs with a unique perfect matching.

Decides whether ``B^-1`` is diagonally similar to a non-negative matrix and
returns a switching matrix or an odd-flower certificate.
"""

__version__ = "0.1.0"

from .balance import (
    Analysis,
    Balanced,
    SwitchingFunction,
    Unbalanced,
    WeightedGraph,
    analyze,
    apply_switching,
    chordless_negative_cycle,
    find_odd_flower,
    inverse_graph,
    is_balanced,
    nonnegative_inverse,
)
from .graph import (
    BipartiteGraph,
    Multigraph,
    assemble_adjacency,
    bipartite_adjacency,
    bipartition,
    format_graph,
    parse_graph,
)
from .linalg import (
    TriangularForm,
    assemble_inverse_adjacency,
    det_adjacency,
    invert_unit_lower_triangular,
    permute_to_triangular,
    triangularize,
)
from .matching import (
    Dag,
    FlowerCertificate,
    Matching,
    PathProfile,
    build_dag,
    flower_check,
    m_span,
    tau_counts,
    unique_perfect_matching,
)
from .poset import Poset, mobius_balance, mobius_matrix, poset_from_dag, poset_to_graph, zeta_at

__all__ = [
    "Analysis", "Balanced", "SwitchingFunction", "Unbalanced", "WeightedGraph", "analyze",
    "apply_switching", "chordless_negative_cycle", "find_odd_flower", "inverse_graph", "is_balanced",
    "nonnegative_inverse", "BipartiteGraph", "Multigraph", "assemble_adjacency", "bipartite_adjacency",
    "bipartition", "format_graph", "parse_graph", "TriangularForm", "assemble_inverse_adjacency",
    "det_adjacency", "invert_unit_lower_triangular", "permute_to_triangular", "triangularize", "Dag",
    "FlowerCertificate", "Matching", "PathProfile", "build_dag", "flower_check", "m_span", "tau_counts",
    "unique_perfect_matching", "Poset", "mobius_balance", "mobius_matrix", "poset_from_dag",
    "poset_to_graph", "zeta_at",
]
