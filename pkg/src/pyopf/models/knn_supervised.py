"""Supervised OPF on a kNN graph with density-maxima prototypes."""

from __future__ import annotations

import logging
import time

import numpy as np

from pyopf.core.subgraph import neighbor_order
from pyopf.exceptions import InvalidKError, LabelError, SingleClassError, TooSmallError
from pyopf.math.distance import check_metric, pre_compute_distances
from pyopf.math.general import opf_accuracy
from pyopf.models.density import fit_knn_graph, knn_assign
from pyopf.models.model import FitReport, TrainedModel
from pyopf.models.supervised import as_samples, check_labels

logger = logging.getLogger(__name__)

DEFAULT_METRIC = "euclidean"


def knn_supervised_fit(X, Y, X_val, Y_val, k_max: int, metric: str = DEFAULT_METRIC) -> TrainedModel:
    """Trains on ``(X, Y)`` for each ``k`` in ``1..k_max`` and keeps the ``k``
    with the best ``opf_accuracy`` on ``(X_val, Y_val)`` (smallest ``k`` on ties).

    Conquest only follows arcs between samples of the same class, so each
    class is covered by trees rooted at its own density maxima.
    """
    start = time.perf_counter()
    check_metric(metric)
    X = as_samples(X)
    Y = check_labels(X, Y)
    X_val = as_samples(X_val, X.shape[1])
    Y_val = check_labels(X_val, Y_val)
    n = X.shape[0]
    if n < 2 or X_val.shape[0] < 1:
        raise TooSmallError("kNN-supervised training needs two training samples and a validation set")
    if np.any(Y < 1) or np.any(Y_val < 1):
        raise LabelError("labels must lie in 1..c")
    if np.unique(Y).size < 2:
        raise SingleClassError("kNN-supervised training needs at least two classes")
    if not 1 <= k_max < n:
        raise InvalidKError(f"k_max must satisfy 1 <= k_max < {n}, got {k_max}")

    D = pre_compute_distances(X, metric)
    order = neighbor_order(D)
    best, best_acc, history = None, -np.inf, []
    for k in range(1, k_max + 1):
        kg = fit_knn_graph(X, Y, k, D, order, same_label=True)
        preds = kg.predicted_label[knn_assign(kg, metric, X_val)]
        acc = opf_accuracy(Y_val, preds)
        history.append({"k": k, "accuracy": acc})
        if acc > best_acc:
            best, best_acc = kg, acc

    report = FitReport(
        training_time=time.perf_counter() - start,
        n_prototypes=int(best.is_prototype.sum()),
        k_best=best.k,
        validation_accuracy=best_acc,
        history=history,
    )
    logger.info("kNN-supervised fit: %d samples, k_best=%d, validation accuracy %.4f, %.4fs",
                n, best.k, best_acc, report.training_time)
    return TrainedModel("knn_supervised", best, metric, k_best=best.k, report=report)


def knn_supervised_predict(model: TrainedModel, X) -> np.ndarray:
    model.check_trained()
    kg = model.subgraph
    X = as_samples(X, kg.n_features)
    return kg.predicted_label[knn_assign(kg, model.metric, X)].copy()
