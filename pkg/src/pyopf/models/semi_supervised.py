"""Semi-supervised OPF.

Prototypes are elected on the MST of the labelled samples only; the
conquest then runs over the complete graph of labelled and unlabelled
samples together, so unlabelled samples inherit the label of the prototype
that reaches them first. New samples are classified exactly as in the
supervised model, against the whole union.
"""

from __future__ import annotations

import logging
import time

import numpy as np

from pyopf.core.prototypes import mst_prototypes
from pyopf.core.subgraph import Subgraph
from pyopf.exceptions import LabelError, SingleClassError, TooSmallError
from pyopf.math.distance import check_metric, pre_compute_distances
from pyopf.models.model import FitReport, TrainedModel
from pyopf.models.supervised import DEFAULT_METRIC, as_samples, check_labels, conflicting_duplicates, fmax_conquest

logger = logging.getLogger(__name__)


def semi_supervised_fit(X_lab, Y_lab, X_unlab=None, metric: str = DEFAULT_METRIC) -> TrainedModel:
    """Trains on labelled samples plus (optionally) unlabelled ones.

    The subgraph holds the labelled samples first, then the unlabelled ones
    (true label 0). ``report.diagnostics["ambiguous"]`` counts unlabelled
    samples reached at the same optimum cost by prototypes of different
    labels; those were settled by the heap's lower-index rule.
    """
    start = time.perf_counter()
    check_metric(metric)
    X_lab = as_samples(X_lab)
    Y_lab = check_labels(X_lab, Y_lab)
    if X_unlab is None:
        X_unlab = np.zeros((0, X_lab.shape[1]))
    X_unlab = as_samples(X_unlab, X_lab.shape[1]) if np.size(X_unlab) else np.zeros((0, X_lab.shape[1]))
    if X_lab.shape[0] < 2:
        raise TooSmallError("semi-supervised training needs at least two labelled samples")
    if np.any(Y_lab < 1):
        raise LabelError("labelled samples need labels in 1..c")
    if np.unique(Y_lab).size < 2:
        raise SingleClassError("semi-supervised training needs at least two labelled classes")

    n_lab = X_lab.shape[0]
    X = np.vstack([X_lab, X_unlab])
    Y = np.concatenate([Y_lab, np.zeros(X_unlab.shape[0], dtype=np.int64)])
    D = pre_compute_distances(X, metric)

    labelled = Subgraph(X_lab, Y_lab)
    prototypes = mst_prototypes(labelled, D[:n_lab, :n_lab])
    sg = Subgraph(X, Y)
    sg.is_prototype[:n_lab] = labelled.is_prototype
    ambiguous = fmax_conquest(sg, D)

    n_ambiguous = int(ambiguous[n_lab:].sum())
    report = FitReport(
        training_time=time.perf_counter() - start,
        n_prototypes=len(prototypes),
        diagnostics={
            "conflicting_duplicates": conflicting_duplicates(X_lab, Y_lab),
            "ambiguous": n_ambiguous,
            "ambiguous_indices": (np.flatnonzero(ambiguous[n_lab:]) + n_lab).tolist(),
        },
    )
    if n_ambiguous:
        logger.warning("%d unlabelled samples were tied between classes", n_ambiguous)
    logger.info("semi-supervised fit: %d labelled, %d unlabelled, %d prototypes, %.4fs",
                n_lab, X_unlab.shape[0], len(prototypes), report.training_time)
    return TrainedModel("semi_supervised", sg, metric, report=report)
