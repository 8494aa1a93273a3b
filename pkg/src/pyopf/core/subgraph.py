"""Subgraphs: column-wise node storage, plus the kNN variant used for
density-based training."""

from __future__ import annotations

import math

import numpy as np

from pyopf.core.heap import NIL
from pyopf.core.node import Node
from pyopf.exceptions import DimensionError, InvalidKError, InvalidStateError
from pyopf.math.distance import pairwise_distances

RHO_MIN = 1.0
RHO_MAX = 1000.0


class Subgraph:
    """A set of nodes sharing one feature space.

    Node state lives in parallel numpy arrays indexed by node position. The
    predecessor array uses ``NIL`` (-1) for roots.

    Args:
        features: ``(n, m)`` sample matrix.
        labels: Optional true labels (0 marks an unlabeled sample).
    """

    def __init__(self, features, labels=None):
        features = np.array(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] < 1:
            raise DimensionError("features must be a 2-D matrix with at least one column")
        n = features.shape[0]
        self.features = features
        if labels is None:
            self.true_label = np.zeros(n, dtype=np.int64)
        else:
            self.true_label = np.array(labels, dtype=np.int64).reshape(-1)
            if self.true_label.shape[0] != n:
                raise DimensionError(f"{self.true_label.shape[0]} labels for {n} samples")
        self.predicted_label = np.zeros(n, dtype=np.int64)
        self.cost = np.zeros(n, dtype=np.float64)
        self.density = np.zeros(n, dtype=np.float64)
        self.predecessor = np.full(n, NIL, dtype=np.int64)
        self.root = np.arange(n, dtype=np.int64)
        self.is_prototype = np.zeros(n, dtype=bool)
        self.is_relevant = np.zeros(n, dtype=bool)
        self.cluster_label = np.zeros(n, dtype=np.int64)
        self.ordered_indices = None
        self.trained = False

    @property
    def n_nodes(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def __len__(self) -> int:
        return self.n_nodes

    def node(self, i: int) -> Node:
        return Node(
            idx=i,
            features=self.features[i].copy(),
            true_label=int(self.true_label[i]),
            predicted_label=int(self.predicted_label[i]),
            cost=float(self.cost[i]),
            density=float(self.density[i]),
            predecessor=int(self.predecessor[i]),
            root=int(self.root[i]),
            is_prototype=bool(self.is_prototype[i]),
            is_relevant=bool(self.is_relevant[i]),
            cluster_label=int(self.cluster_label[i]),
        )

    @property
    def nodes(self) -> list[Node]:
        return [self.node(i) for i in range(self.n_nodes)]

    @classmethod
    def from_nodes(cls, nodes: list[Node]) -> "Subgraph":
        dims = {len(nd.features) for nd in nodes}
        if len(dims) != 1:
            raise DimensionError(f"nodes disagree on feature dimension: {sorted(dims)}")
        sg = cls(np.stack([nd.features for nd in nodes]), [nd.true_label for nd in nodes])
        for i, nd in enumerate(nodes):
            sg.predicted_label[i] = nd.predicted_label
            sg.cost[i] = nd.cost
            sg.density[i] = nd.density
            sg.predecessor[i] = nd.predecessor
            sg.root[i] = nd.root
            sg.is_prototype[i] = nd.is_prototype
            sg.is_relevant[i] = nd.is_relevant
            sg.cluster_label[i] = nd.cluster_label
        return sg

    def reset_state(self) -> None:
        n = self.n_nodes
        self.predicted_label[:] = 0
        self.cost[:] = 0.0
        self.density[:] = 0.0
        self.predecessor[:] = NIL
        self.root[:] = np.arange(n)
        self.is_prototype[:] = False
        self.is_relevant[:] = False
        self.cluster_label[:] = 0
        self.ordered_indices = None
        self.trained = False

    def path_to_root(self, i: int) -> list[int]:
        """Node indices from ``i`` back to its root, inclusive."""
        path = [i]
        while self.predecessor[path[-1]] != NIL:
            path.append(int(self.predecessor[path[-1]]))
            if len(path) > self.n_nodes:
                raise InvalidStateError(f"predecessor cycle through node {i}")
        return path

    def validate(self) -> None:
        """Checks the structural invariants, raising InvalidStateError."""
        n = self.n_nodes
        idx = np.arange(n)
        if np.any(self.predecessor == idx):
            raise InvalidStateError("a node is its own predecessor")
        proto = np.flatnonzero(self.is_prototype)
        if np.any(self.predecessor[proto] != NIL) or np.any(self.root[proto] != proto):
            raise InvalidStateError("prototypes must be roots without predecessor")
        for i in range(n):
            self.path_to_root(i)
        if self.trained and self.ordered_indices is not None:
            order = np.asarray(self.ordered_indices)
            if sorted(order.tolist()) != list(range(n)):
                raise InvalidStateError("ordered_indices is not a permutation")
            if np.any(np.diff(self.cost[order]) < 0):
                raise InvalidStateError("costs along ordered_indices decrease")


class KNNSubgraph(Subgraph):
    """Subgraph whose arcs join each node to its k nearest neighbours.

    Adjacency is stored in compressed rows: the arcs leaving node ``s`` are
    ``adj_index[adj_ptr[s]:adj_ptr[s + 1]]`` with weights in ``adj_weight``,
    sorted by (weight, neighbour index).
    """

    def __init__(self, features, labels=None):
        super().__init__(features, labels)
        self.k = 0
        self.adj_ptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        self.adj_index = np.zeros(0, dtype=np.int64)
        self.adj_weight = np.zeros(0, dtype=np.float64)
        self.d_f = 0.0
        self.rho_min = 0.0
        self.rho_max = 0.0
        self.n_clusters = 0

    @property
    def sigma(self) -> float:
        return self.d_f / 3.0

    def neighbors(self, s: int) -> np.ndarray:
        return self.adj_index[self.adj_ptr[s]:self.adj_ptr[s + 1]]

    def weights(self, s: int) -> np.ndarray:
        return self.adj_weight[self.adj_ptr[s]:self.adj_ptr[s + 1]]

    @property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        return [
            list(zip(self.neighbors(s).tolist(), self.weights(s).tolist()))
            for s in range(self.n_nodes)
        ]

    def degree(self) -> np.ndarray:
        return np.diff(self.adj_ptr)


def distance_matrix_for(sg: Subgraph, dist) -> np.ndarray:
    """Resolves ``dist`` into the subgraph's full distance matrix.

    ``dist`` may be a metric name, a callable ``(u, v) -> float`` or an
    already computed ``(n, n)`` matrix.
    """
    n = sg.n_nodes
    if isinstance(dist, str):
        D = pairwise_distances(dist, sg.features, sg.features)
        np.fill_diagonal(D, 0.0)
        return D
    if callable(dist):
        D = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                if i != j:
                    D[i, j] = dist(sg.features[i], sg.features[j])
        return D
    D = np.asarray(dist, dtype=np.float64)
    if D.shape != (n, n):
        raise DimensionError(f"distance matrix must be {n}x{n}, got {D.shape}")
    return D


def neighbor_order(D: np.ndarray) -> np.ndarray:
    """Per row, the other nodes sorted by distance, ties to the lower index."""
    D = np.array(D, dtype=np.float64)
    np.fill_diagonal(D, np.inf)
    return np.argsort(D, axis=1, kind="stable")[:, :-1]


def build_knn_adjacency(kg: KNNSubgraph, k: int, dist, order: np.ndarray | None = None) -> None:
    """Connects every node to its ``k`` nearest neighbours, then symmetrises.

    A one-directional arc ``s -> t`` gets its reverse ``t -> s`` added, so a
    node's degree can exceed ``k``. ``d_f`` becomes the largest arc weight.

    Args:
        kg: Subgraph to fill in place.
        k: Neighbourhood size, ``1 <= k < n``.
        dist: Metric name, callable or precomputed distance matrix.
        order: Optional result of :func:`neighbor_order` for ``dist``, reused
            when the same graph is rebuilt for several ``k``.
    """
    n = kg.n_nodes
    if not 1 <= k < n:
        raise InvalidKError(f"k must satisfy 1 <= k < {n}, got {k}")
    D = distance_matrix_for(kg, dist)
    if order is None:
        order = neighbor_order(D)

    src = np.repeat(np.arange(n), k)
    dst = order[:, :k].reshape(-1)
    codes = np.unique(np.concatenate([src * n + dst, dst * n + src]))
    src, dst = codes // n, codes % n
    w = D[src, dst]
    arcs = np.lexsort((dst, w, src))
    src, dst, w = src[arcs], dst[arcs], w[arcs]

    kg.k = k
    kg.adj_ptr = np.concatenate([[0], np.cumsum(np.bincount(src, minlength=n))]).astype(np.int64)
    kg.adj_index = dst.astype(np.int64)
    kg.adj_weight = w.astype(np.float64)
    kg.d_f = float(w.max())


def rescale_density(raw, rho_min: float, rho_max: float):
    """Linear map of raw densities onto [1, 1000], clipped at both ends.

    A flat field (``rho_max == rho_min``) maps to 1000.
    """
    if rho_max == rho_min:
        return np.full_like(np.asarray(raw, dtype=np.float64), RHO_MAX)
    ratio = (np.asarray(raw, dtype=np.float64) - rho_min) / (rho_max - rho_min)
    return RHO_MIN + (RHO_MAX - RHO_MIN) * np.clip(ratio, 0.0, 1.0)


def compute_density(kg: KNNSubgraph) -> None:
    """Parzen-window density of every node over its arcs, rescaled to [1, 1000].

    The kernel is an isotropic Gaussian with ``sigma = d_f / 3`` and the sum
    is divided by ``k``. When every arc has zero length all densities are set
    to 1000.
    """
    n = kg.n_nodes
    if kg.adj_index.size == 0:
        raise InvalidStateError("adjacency has not been built")
    if kg.d_f == 0.0:
        kg.rho_min = kg.rho_max = 0.0
        kg.density[:] = RHO_MAX
        return
    sigma = kg.sigma
    src = np.repeat(np.arange(n), kg.degree())
    terms = np.exp(-(kg.adj_weight ** 2) / (2.0 * sigma * sigma))
    raw = np.bincount(src, weights=terms, minlength=n) / (math.sqrt(2.0 * math.pi * sigma * sigma) * kg.k)
    kg.rho_min = float(raw.min())
    kg.rho_max = float(raw.max())
    kg.density[:] = rescale_density(raw, kg.rho_min, kg.rho_max)
