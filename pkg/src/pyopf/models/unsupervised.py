"""Clustering with the unsupervised OPF."""

from __future__ import annotations

import logging
import time

import numpy as np

from pyopf.core.subgraph import neighbor_order
from pyopf.exceptions import InvalidKError, TooSmallError
from pyopf.math.distance import check_metric, pre_compute_distances
from pyopf.models.density import fit_knn_graph, knn_assign, normalized_cut
from pyopf.models.model import FitReport, TrainedModel
from pyopf.models.supervised import as_samples

logger = logging.getLogger(__name__)

DEFAULT_METRIC = "euclidean"


def unsupervised_fit(X, k_max: int, metric: str = DEFAULT_METRIC) -> TrainedModel:
    """Clusters ``X``, choosing the neighbourhood size by normalised cut.

    For every ``k`` in ``1..k_max`` the kNN graph, densities and forest are
    built and scored with :func:`~pyopf.models.density.normalized_cut`. The
    lowest score wins; on equal scores the larger ``k`` is kept, since a
    wider neighbourhood gives the smoother density estimate. A partition
    into a single cluster is only chosen when every ``k`` gives one.

    Returns:
        A model whose subgraph nodes carry ``cluster_label`` in
        ``0..n_clusters-1``.
    """
    start = time.perf_counter()
    check_metric(metric)
    X = as_samples(X)
    n = X.shape[0]
    if n < 2:
        raise TooSmallError("clustering needs at least two samples")
    if not 1 <= k_max < n:
        raise InvalidKError(f"k_max must satisfy 1 <= k_max < {n}, got {k_max}")

    D = pre_compute_distances(X, metric)
    order = neighbor_order(D)
    best, best_key, history = None, None, []
    for k in range(1, k_max + 1):
        kg = fit_knn_graph(X, None, k, D, order)
        cut = normalized_cut(kg)
        history.append({"k": k, "cut": cut, "n_clusters": kg.n_clusters})
        logger.debug("k=%d: %d clusters, cut %.6f", k, kg.n_clusters, cut)
        # a single cluster has no external arcs and scores 0 vacuously
        key = (kg.n_clusters == 1, cut)
        if best_key is None or key <= best_key:
            best, best_key = kg, key

    report = FitReport(
        training_time=time.perf_counter() - start,
        n_prototypes=int(best.is_prototype.sum()),
        k_best=best.k,
        n_clusters=best.n_clusters,
        history=history,
    )
    logger.info("unsupervised fit: %d samples, k_best=%d, %d clusters, %.4fs",
                n, best.k, best.n_clusters, report.training_time)
    return TrainedModel("unsupervised", best, metric, k_best=best.k, report=report)


def unsupervised_predict(model: TrainedModel, X) -> np.ndarray:
    """Cluster ids for new samples."""
    model.check_trained()
    kg = model.subgraph
    X = as_samples(X, kg.n_features)
    return kg.cluster_label[knn_assign(kg, model.metric, X)].copy()
