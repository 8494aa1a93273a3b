"""Density-driven conquest on kNN graphs, shared by clustering and the
kNN-supervised classifier."""

from __future__ import annotations

import math

import numpy as np

from pyopf.core.heap import NIL, CostHeap
from pyopf.core.subgraph import RHO_MAX, KNNSubgraph, build_knn_adjacency, compute_density, rescale_density
from pyopf.math.distance import pairwise_distances

DELTA = 1.0


def density_conquest(kg: KNNSubgraph, same_label: bool = False) -> int:
    """Maximises the path value ``f`` from the density maxima.

    A trivial path is worth ``rho(t)`` at a root and ``rho(t) - DELTA``
    elsewhere; extending a path to ``t`` gives ``min(f(pi_s), rho(t))``.
    Nodes that no neighbour improves before they leave the heap become
    roots (prototypes) and start a new cluster.

    Args:
        kg: Subgraph with adjacency and densities in place.
        same_label: Only let arcs between equal true labels propagate, so
            each class grows its own trees and predicted labels carry the
            roots' true labels.

    Returns:
        Number of trees (clusters) in the forest.
    """
    n = kg.n_nodes
    rho = kg.density
    f = rho - DELTA
    pred = np.full(n, NIL, dtype=np.int64)
    root = np.arange(n, dtype=np.int64)
    cluster = np.zeros(n, dtype=np.int64)
    label = np.zeros(n, dtype=np.int64)
    prototype = np.zeros(n, dtype=bool)
    done = np.zeros(n, dtype=bool)
    true = kg.true_label

    heap = CostHeap(n, "max")
    for i in range(n):
        heap.insert(i, float(f[i]))

    n_clusters = 0
    ptr, adj = kg.adj_ptr, kg.adj_index
    while not heap.is_empty():
        s = heap.extract()
        done[s] = True
        if pred[s] == NIL:
            f[s] = rho[s]
            prototype[s] = True
            cluster[s] = n_clusters
            label[s] = true[s]
            n_clusters += 1
        fs = f[s]
        for t in adj[ptr[s]:ptr[s + 1]].tolist():
            if done[t] or f[t] >= fs:
                continue
            if same_label and true[t] != true[s]:
                continue
            value = min(fs, rho[t])
            if value > f[t]:
                f[t] = value
                pred[t] = s
                root[t] = root[s]
                cluster[t] = cluster[s]
                label[t] = label[s]
                heap.update(t, float(value))

    kg.cost[:] = f
    kg.predecessor[:] = pred
    kg.root[:] = root
    kg.cluster_label[:] = cluster
    kg.predicted_label[:] = label
    kg.is_prototype[:] = prototype
    kg.n_clusters = n_clusters
    kg.trained = True
    return n_clusters


def normalized_cut(kg: KNNSubgraph, labels=None) -> float:
    """Sum over clusters of external / (internal + external) arc affinity.

    Arc weights ``d`` become affinities ``1 / (1 + d)``.
    """
    labels = kg.cluster_label if labels is None else np.asarray(labels)
    src = np.repeat(np.arange(kg.n_nodes), kg.degree())
    dst = kg.adj_index
    w = 1.0 / (1.0 + kg.adj_weight)
    same = labels[src] == labels[dst]
    c = int(labels.max()) + 1
    internal = np.bincount(labels[src][same], weights=w[same], minlength=c)
    external = np.bincount(labels[src][~same], weights=w[~same], minlength=c)
    total = internal + external
    used = total > 0
    return float(np.sum(external[used] / total[used]))


def fit_knn_graph(X: np.ndarray, labels, k: int, D: np.ndarray, order: np.ndarray,
                  same_label: bool = False) -> KNNSubgraph:
    kg = KNNSubgraph(X, labels)
    build_knn_adjacency(kg, k, D, order)
    compute_density(kg)
    density_conquest(kg, same_label)
    return kg


def knn_assign(kg: KNNSubgraph, metric: str, X: np.ndarray) -> np.ndarray:
    """For each row of ``X``, the training node it attaches to.

    The sample's ``k`` nearest training nodes are its neighbours. Its density
    is estimated over them with the training kernel and rescaled with the
    training bounds; it then joins the neighbour ``s`` maximising
    ``min(f(s), rho_t)`` (ties go to the nearer neighbour).
    """
    Dt = pairwise_distances(metric, X, kg.features)
    k = kg.k
    nearest = np.argsort(Dt, axis=1, kind="stable")[:, :k]
    d = np.take_along_axis(Dt, nearest, axis=1)
    if kg.d_f == 0.0:
        rho_t = np.full(X.shape[0], RHO_MAX)
    else:
        sigma = kg.sigma
        raw = np.exp(-(d ** 2) / (2.0 * sigma * sigma)).sum(axis=1) / (math.sqrt(2.0 * math.pi * sigma * sigma) * k)
        rho_t = rescale_density(raw, kg.rho_min, kg.rho_max)
    values = np.minimum(kg.cost[nearest], rho_t[:, None])
    pick = np.argmax(values, axis=1)
    return nearest[np.arange(X.shape[0]), pick]
