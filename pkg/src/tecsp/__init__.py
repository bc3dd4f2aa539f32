"""Maximum-weight 2-edge-connected subgraphs: branch-and-cut solver and polyhedral oracle."""

from .graph import Graph, EdgeSubgraph, CutSet, bridges, delta, is_two_edge_connected, min_st_cut
from .copar import CoparallelPartition, coparallel_partition, dimension
from .inequalities import Family, LinearInequality
from .solver import Model, ModelConfig, SeparationMode, SolveReport, Status, solve

__all__ = [
    "CoparallelPartition",
    "CutSet",
    "EdgeSubgraph",
    "Family",
    "Graph",
    "LinearInequality",
    "Model",
    "ModelConfig",
    "SeparationMode",
    "SolveReport",
    "Status",
    "bridges",
    "coparallel_partition",
    "delta",
    "dimension",
    "is_two_edge_connected",
    "min_st_cut",
    "solve",
]
