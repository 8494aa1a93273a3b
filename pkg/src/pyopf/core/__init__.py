"""Graph structures and algorithms shared by every classifier."""

from pyopf.core.heap import NIL, Color, CostHeap
from pyopf.core.node import Node
from pyopf.core.prototypes import minimum_spanning_tree, mst_prototypes
from pyopf.core.subgraph import (
    RHO_MAX,
    RHO_MIN,
    KNNSubgraph,
    Subgraph,
    build_knn_adjacency,
    compute_density,
    neighbor_order,
)

__all__ = [
    "NIL",
    "RHO_MAX",
    "RHO_MIN",
    "Color",
    "CostHeap",
    "KNNSubgraph",
    "Node",
    "Subgraph",
    "build_knn_adjacency",
    "compute_density",
    "minimum_spanning_tree",
    "mst_prototypes",
    "neighbor_order",
]
