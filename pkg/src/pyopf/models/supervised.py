"""Supervised OPF on the complete graph.

Training elects prototypes on the minimum spanning tree and lets them
compete for every other sample under the path cost ``f_max`` (the largest
arc on the path), so each trained cost is the minimax distance from the
prototype set. A new sample ``t`` is labelled by the training node ``s``
that minimises ``max(C(s), d(s, t))``.
"""

from __future__ import annotations

import logging
import time
from typing import NamedTuple

import numpy as np

from pyopf.core.heap import NIL, CostHeap
from pyopf.core.prototypes import mst_prototypes
from pyopf.core.subgraph import Subgraph
from pyopf.exceptions import DimensionError, LabelError, SingleClassError, TooSmallError
from pyopf.math.distance import check_distance_matrix, check_metric, pairwise_distances, pre_compute_distances
from pyopf.models.model import FitReport, TrainedModel

logger = logging.getLogger(__name__)

DEFAULT_METRIC = "log_squared_euclidean"


def as_samples(X, n_features: int | None = None) -> np.ndarray:
    try:
        X = np.asarray(X, dtype=np.float64)
    except ValueError as e:
        raise DimensionError(f"ragged sample matrix: {e}") from None
    if X.ndim == 1:
        X = X.reshape(-1, 1) if n_features in (None, 1) else X.reshape(1, -1)
    if X.ndim != 2:
        raise DimensionError("expected a two-dimensional sample matrix")
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionError(f"model expects {n_features} features, got {X.shape[1]}")
    return X


def check_labels(X: np.ndarray, Y) -> np.ndarray:
    Y = np.asarray(Y).reshape(-1)
    if Y.shape[0] != X.shape[0]:
        raise LabelError(f"{Y.shape[0]} labels for {X.shape[0]} samples")
    if not np.all(np.equal(np.mod(Y, 1), 0)):
        raise LabelError("labels must be integers")
    return Y.astype(np.int64)


def conflicting_duplicates(X: np.ndarray, Y: np.ndarray) -> int:
    """Number of samples whose exact feature vector also carries another label."""
    seen: dict[bytes, set] = {}
    keys = [row.tobytes() for row in np.ascontiguousarray(X)]
    for key, y in zip(keys, Y.tolist()):
        seen.setdefault(key, set()).add(y)
    return sum(1 for key in keys if len(seen[key]) > 1)


def fmax_conquest(sg: Subgraph, D: np.ndarray) -> np.ndarray:
    """Minimises ``f_max`` from the marked prototypes over the complete graph.

    Fills cost, predecessor, root, predicted_label and ordered_indices in
    place. When a node is offered its current cost by a root of its own
    true class, that offer wins over a root of another class.

    Returns:
        Boolean mask of nodes whose optimum cost was also offered, at the
        same value, by a root of a different label.
    """
    n = sg.n_nodes
    cost = np.where(sg.is_prototype, 0.0, np.inf)
    pred = np.full(n, NIL, dtype=np.int64)
    root = np.arange(n, dtype=np.int64)
    label = np.where(sg.is_prototype, sg.true_label, 0)
    tie_cost = np.full(n, np.nan)
    done = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)

    # among equal costs, nodes already carrying their true label go first
    labelled = sg.true_label > 0
    heap = CostHeap(n, "min")
    for i in range(n):
        heap.ranks[i] = int(labelled[i] and label[i] != sg.true_label[i])
        heap.insert(i, float(cost[i]))

    for step in range(n):
        s = heap.extract()
        done[s] = True
        order[step] = s
        offer = np.maximum(cost[s], D[s])
        open_ = ~done
        ties = np.flatnonzero(open_ & (offer == cost) & (label != label[s]))
        tie_cost[ties] = offer[ties]
        # an equal offer from the node's own class replaces a foreign one
        for t in ties[sg.true_label[ties] == label[s]]:
            pred[t] = s
            root[t] = root[s]
            label[t] = label[s]
            heap.set_rank(int(t), 0)
        for t in np.flatnonzero(open_ & (offer < cost)):
            cost[t] = offer[t]
            pred[t] = s
            root[t] = root[s]
            label[t] = label[s]
            heap.ranks[t] = int(labelled[t] and label[t] != sg.true_label[t])
            heap.update(int(t), float(offer[t]))

    sg.cost[:] = cost
    sg.predecessor[:] = pred
    sg.root[:] = root
    sg.predicted_label[:] = label
    sg.ordered_indices = order
    sg.trained = True
    return (tie_cost == cost) & ~sg.is_prototype


def supervised_fit(X, Y, metric: str = DEFAULT_METRIC, precomputed=None) -> TrainedModel:
    """Trains a supervised OPF classifier.

    Args:
        X: ``(n, m)`` training samples.
        Y: Labels in ``1..c`` with at least two distinct values.
        metric: Distance metric name.
        precomputed: Optional ``(n, n)`` distance matrix for ``X``; must
            have been computed with ``metric``.

    Returns:
        The trained model; ``model.report`` holds timing and diagnostics.
    """
    start = time.perf_counter()
    check_metric(metric)
    X = as_samples(X)
    Y = check_labels(X, Y)
    if X.shape[0] < 2:
        raise TooSmallError("supervised training needs at least two samples")
    if np.any(Y < 1):
        raise LabelError("supervised training needs labels in 1..c")
    if np.unique(Y).size < 2:
        raise SingleClassError("supervised training needs at least two classes")

    D = pre_compute_distances(X, metric) if precomputed is None else check_distance_matrix(precomputed, X.shape[0])
    sg = Subgraph(X, Y)
    prototypes = mst_prototypes(sg, D)
    fmax_conquest(sg, D)

    report = FitReport(
        training_time=time.perf_counter() - start,
        n_prototypes=len(prototypes),
        diagnostics={"conflicting_duplicates": conflicting_duplicates(X, Y)},
    )
    if report.diagnostics["conflicting_duplicates"]:
        logger.warning("%d training samples share features with a differently labelled sample",
                       report.diagnostics["conflicting_duplicates"])
    logger.info("supervised fit: %d samples, %d prototypes, %.4fs", X.shape[0], len(prototypes), report.training_time)
    return TrainedModel("supervised", sg, metric, precomputed=precomputed, report=report)


class Classification(NamedTuple):
    labels: np.ndarray
    costs: np.ndarray
    conqueror: np.ndarray  # training node offering the optimum path


def supervised_classify(model: TrainedModel, X, early_stop: bool = True) -> Classification:
    """Evaluates ``min_s max(C(s), d(s, t))`` for every row ``t`` of ``X``.

    Training nodes are scanned in ascending cost. Equal values go to the
    node closest to ``t`` and then to the first in scan order, so a sample
    identical to a training node takes that node's label. With
    ``early_stop`` the scan ends once the best value so far is below the
    next stored cost, which cannot change the outcome; without it every
    node is scanned.
    """
    model.check_trained()
    sg = model.subgraph
    X = as_samples(X, sg.n_features)
    order = np.asarray(sg.ordered_indices)
    C = sg.cost[order]
    Dt = pairwise_distances(model.metric, X, sg.features)[:, order]
    p = X.shape[0]

    if early_stop:
        costs = np.empty(p)
        pos = np.empty(p, dtype=np.int64)
        C_list = C.tolist()
        for i in range(p):
            best = best_d = np.inf
            arg = 0
            for j, (c, d) in enumerate(zip(C_list, Dt[i].tolist())):
                if best < c:
                    break
                v = c if c > d else d
                if v < best or (v == best and d < best_d):
                    best, best_d, arg = v, d, j
            costs[i] = best
            pos[i] = arg
    else:
        values = np.maximum(C[None, :], Dt)
        costs = values.min(axis=1)
        pos = np.argmin(np.where(values == costs[:, None], Dt, np.inf), axis=1)

    conqueror = order[pos]
    return Classification(sg.predicted_label[conqueror].copy(), costs, conqueror)


def supervised_predict(model: TrainedModel, X, early_stop: bool = True) -> np.ndarray:
    return supervised_classify(model, X, early_stop).labels
