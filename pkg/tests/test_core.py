import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import frontier_endpoints, kruskal, prufer_min_spanning_weight, tree_weight
from pyopf.core import (
    NIL,
    KNNSubgraph,
    Node,
    Subgraph,
    build_knn_adjacency,
    compute_density,
    minimum_spanning_tree,
    mst_prototypes,
)
from pyopf.exceptions import DimensionError, InvalidKError, InvalidStateError, SingleClassError, TooSmallError
from pyopf.math.distance import pre_compute_distances


# -- subgraph ------------------------------------------------------------------

def test_node_roundtrip():
    sg = Subgraph([[1.0, 2.0], [3.0, 4.0]], [1, 2])
    sg.cost[1] = 2.5
    sg.predecessor[1] = 0
    sg.root[1] = 0
    nodes = sg.nodes
    assert nodes[1].cost == 2.5 and nodes[1].predecessor == 0
    back = Subgraph.from_nodes(nodes)
    assert np.array_equal(back.features, sg.features)
    assert np.array_equal(back.predecessor, sg.predecessor)


def test_from_nodes_rejects_mixed_dimensions():
    with pytest.raises(DimensionError):
        Subgraph.from_nodes([Node(0, [1.0]), Node(1, [1.0, 2.0])])


def test_validate_detects_cycles_and_self_loops():
    sg = Subgraph(np.zeros((3, 1)))
    sg.predecessor[:] = [1, 2, 0]
    with pytest.raises(InvalidStateError):
        sg.validate()
    sg.predecessor[:] = [0, NIL, NIL]
    with pytest.raises(InvalidStateError):
        sg.validate()


def test_validate_prototype_must_be_root():
    sg = Subgraph(np.zeros((2, 1)))
    sg.is_prototype[1] = True
    sg.predecessor[1] = 0
    with pytest.raises(InvalidStateError):
        sg.validate()


# -- MST prototypes ------------------------------------------------------------

def test_two_nodes_two_classes():
    sg = Subgraph([[0.0], [1.0]], [1, 2])
    assert mst_prototypes(sg, "euclidean") == [0, 1]


def test_four_point_frontier():
    sg = Subgraph([[0.0], [1.0], [10.0], [11.0]], [1, 1, 2, 2])
    assert mst_prototypes(sg, "euclidean") == [1, 2]
    assert sg.is_prototype.tolist() == [False, True, True, False]


def test_single_class_and_too_small():
    with pytest.raises(SingleClassError):
        mst_prototypes(Subgraph(np.arange(4.0).reshape(4, 1), [1, 1, 1, 1]), "euclidean")
    with pytest.raises(TooSmallError):
        mst_prototypes(Subgraph([[0.0]], [1]), "euclidean")


def test_accepts_callable_and_matrix():
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    a = mst_prototypes(Subgraph(X, [1, 1, 2, 2]), lambda u, v: abs(u[0] - v[0]))
    b = mst_prototypes(Subgraph(X, [1, 1, 2, 2]), pre_compute_distances(X, "euclidean"))
    assert a == b == [1, 2]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_prim_matches_exhaustive_tree_enumeration(n, seed):
    rng = np.random.default_rng(seed)
    D = pre_compute_distances(rng.normal(size=(n, 2)), "euclidean")
    pred = minimum_spanning_tree(D)
    edges = [(int(pred[t]), t) for t in range(n) if pred[t] != NIL]
    assert len(edges) == n - 1
    assert math.isclose(tree_weight(edges, D), prufer_min_spanning_weight(D), rel_tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 8), st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_prototypes_match_kruskal(n, c, m, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, m))
    Y = np.concatenate([np.arange(1, c + 1), rng.integers(1, c + 1, size=n)])[:n]
    if np.unique(Y).size < 2:
        Y[0], Y[1] = 1, 2
    D = pre_compute_distances(X, "euclidean")
    sg = Subgraph(X, Y)
    got = set(mst_prototypes(sg, D))
    edges, _ = kruskal(D)
    assert got == frontier_endpoints(edges, Y)


# -- kNN graph and density -----------------------------------------------------

def test_knn_three_collinear_points():
    kg = KNNSubgraph([[0.0], [1.0], [3.0]])
    build_knn_adjacency(kg, 1, "euclidean")
    assert kg.adjacency == [[(1, 1.0)], [(0, 1.0), (2, 2.0)], [(1, 2.0)]]
    assert kg.d_f == 2.0


def test_knn_two_nodes():
    kg = KNNSubgraph([[0.0, 0.0], [3.0, 4.0]])
    build_knn_adjacency(kg, 1, "euclidean")
    assert kg.adjacency == [[(1, 5.0)], [(0, 5.0)]]
    assert kg.d_f == 5.0


@pytest.mark.parametrize("k", [0, 3, 4])
def test_knn_invalid_k(k):
    with pytest.raises(InvalidKError):
        build_knn_adjacency(KNNSubgraph(np.zeros((3, 1))), k, "euclidean")


def test_knn_ties_go_to_lower_index():
    kg = KNNSubgraph([[0.0], [-1.0], [1.0]])
    build_knn_adjacency(kg, 1, "euclidean")
    assert kg.neighbors(0).tolist() == [1, 2]  # 0 -> 1 by tie-break, 2 -> 0 reversed
    assert kg.neighbors(2).tolist() == [0]


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 30), st.integers(0, 2**32 - 1), st.data())
def test_knn_symmetric_and_covers_k(n, seed, data):
    k = data.draw(st.integers(1, n - 1))
    X = np.random.default_rng(seed).normal(size=(n, 2))
    kg = KNNSubgraph(X)
    build_knn_adjacency(kg, k, "euclidean")
    arcs = {(s, t) for s in range(n) for t in kg.neighbors(s).tolist()}
    assert all((t, s) in arcs for s, t in arcs)
    assert all(s != t for s, t in arcs)
    assert np.all(kg.degree() >= k)
    assert kg.d_f == max(kg.adj_weight)
    D = pre_compute_distances(X, "euclidean")
    for s in range(n):
        nearest = sorted(range(n), key=lambda t: (D[s, t], t))
        nearest.remove(s)
        assert set(nearest[:k]) <= set(kg.neighbors(s).tolist())


def test_density_three_points_by_hand():
    kg = KNNSubgraph([[0.0], [1.0], [3.0]])
    build_knn_adjacency(kg, 1, "euclidean")
    compute_density(kg)
    sigma = 2.0 / 3.0

    def kernel(d):
        return math.exp(-d * d / (2 * sigma * sigma)) / math.sqrt(2 * math.pi * sigma * sigma)

    raw = [kernel(1), kernel(1) + kernel(2), kernel(2)]  # sums over arcs, divided by k = 1
    assert kg.rho_min == pytest.approx(min(raw), rel=1e-12)
    assert kg.rho_max == pytest.approx(max(raw), rel=1e-12)
    expected = [1 + 999 * (r - min(raw)) / (max(raw) - min(raw)) for r in raw]
    assert kg.density == pytest.approx(expected, rel=1e-12)
    assert int(np.argmax(kg.density)) == 1


@pytest.mark.parametrize("X, k", [
    ([[0.0], [2.0]], 1),  # the single distance is d_f
    ([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], 2),  # regular simplex, complete graph
])
def test_density_constant_field_maps_to_upper_bound(X, k):
    kg = KNNSubgraph(X)
    build_knn_adjacency(kg, k, "euclidean")
    compute_density(kg)
    assert kg.rho_min == kg.rho_max
    assert kg.density.tolist() == [1000.0] * len(X)


def test_density_duplicated_points():
    kg = KNNSubgraph(np.ones((5, 2)))
    build_knn_adjacency(kg, 2, "euclidean")
    assert kg.d_f == 0.0
    compute_density(kg)
    assert kg.density.tolist() == [1000.0] * 5


def test_density_requires_adjacency():
    with pytest.raises(InvalidStateError):
        compute_density(KNNSubgraph(np.zeros((3, 1))))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 40), st.integers(0, 2**32 - 1), st.data())
def test_density_range(n, seed, data):
    k = data.draw(st.integers(1, n - 1))
    kg = KNNSubgraph(np.random.default_rng(seed).normal(size=(n, 3)))
    build_knn_adjacency(kg, k, "euclidean")
    compute_density(kg)
    assert np.all((kg.density >= 1.0) & (kg.density <= 1000.0))
    if kg.rho_max > kg.rho_min:
        assert kg.density.min() == 1.0 and kg.density.max() == 1000.0
