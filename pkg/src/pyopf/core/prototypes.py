"""Prototype election on the minimum spanning tree."""

from __future__ import annotations

import numpy as np

from pyopf.core.heap import NIL, CostHeap
from pyopf.core.subgraph import Subgraph, distance_matrix_for
from pyopf.exceptions import SingleClassError, TooSmallError


def minimum_spanning_tree(D: np.ndarray) -> np.ndarray:
    """Prim's algorithm on the complete graph given by ``D``.

    Returns:
        Predecessor array of the tree rooted at node 0 (``NIL`` for the root).
    """
    n = D.shape[0]
    heap = CostHeap(n, "min")
    key = np.full(n, np.inf)
    key[0] = 0.0
    pred = np.full(n, NIL, dtype=np.int64)
    for i in range(n):
        heap.insert(i, float(key[i]))
    done = np.zeros(n, dtype=bool)

    while not heap.is_empty():
        s = heap.extract()
        done[s] = True
        row = D[s]
        for t in np.flatnonzero(~done & (row < key)):
            key[t] = row[t]
            pred[t] = s
            heap.update(int(t), float(row[t]))
    return pred


def mst_prototypes(subgraph: Subgraph, dist) -> list[int]:
    """Marks as prototypes both ends of every MST edge joining two classes.

    Args:
        subgraph: Labelled subgraph; all labels must be positive.
        dist: Metric name, callable or precomputed distance matrix.

    Returns:
        Sorted indices of the prototypes.
    """
    n = subgraph.n_nodes
    if n < 2:
        raise TooSmallError("prototype election needs at least two samples")
    labels = subgraph.true_label
    if np.any(labels < 1):
        raise SingleClassError("every sample must carry a positive label")
    if np.unique(labels).size < 2:
        raise SingleClassError("prototype election needs at least two classes")

    D = distance_matrix_for(subgraph, dist)
    pred = minimum_spanning_tree(D)
    subgraph.is_prototype[:] = False
    for t in range(n):
        s = pred[t]
        if s != NIL and labels[s] != labels[t]:
            subgraph.is_prototype[s] = True
            subgraph.is_prototype[t] = True
    return np.flatnonzero(subgraph.is_prototype).tolist()

