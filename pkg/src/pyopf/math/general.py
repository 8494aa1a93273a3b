"""Classification metrics and feature normalisation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pyopf.exceptions import DegenerateClassError, DimensionError, LabelError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts of (true, predicted) label pairs.

    ``counts[i - 1, j - 1]`` holds the number of samples with true label ``i``
    predicted as ``j``; use :meth:`count` for 1-based access.
    """

    counts: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    def count(self, true_label: int, pred_label: int) -> int:
        return int(self.counts[true_label - 1, pred_label - 1])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def is_diagonal(self) -> bool:
        return not np.any(self.counts - np.diag(np.diag(self.counts)))


def _check_labels(truth, pred):
    truth = np.asarray(truth)
    pred = np.asarray(pred)
    if truth.ndim != 1 or pred.ndim != 1 or truth.shape != pred.shape:
        raise LabelError(f"label vectors must be 1-D with equal length, got {truth.shape} and {pred.shape}")
    if truth.size == 0:
        raise LabelError("label vectors are empty")
    truth = truth.astype(np.int64)
    pred = pred.astype(np.int64)
    if truth.min() < 1 or pred.min() < 1:
        raise LabelError("labels must lie in 1..c; label 0 marks unlabeled samples")
    return truth, pred


def confusion_matrix(truth, pred, n_classes: int | None = None) -> ConfusionMatrix:
    """Tallies true versus predicted labels.

    Args:
        truth: True labels in ``1..c``.
        pred: Predicted labels in ``1..c``.
        n_classes: Number of classes ``c``; defaults to the largest label seen.
    """
    truth, pred = _check_labels(truth, pred)
    c = int(max(truth.max(), pred.max())) if n_classes is None else int(n_classes)
    if truth.max() > c or pred.max() > c:
        raise LabelError(f"label exceeds the number of classes ({c})")
    counts = np.zeros((c, c), dtype=np.int64)
    np.add.at(counts, (truth - 1, pred - 1), 1)
    return ConfusionMatrix(counts)


def opf_accuracy(truth, pred, n_classes: int | None = None) -> float:
    """Class-balanced accuracy used throughout the OPF literature.

    For each class ``i`` with ``n_i`` members among ``N`` samples the false
    positive rate ``FP_i / (N - n_i)`` and the false negative rate
    ``FN_i / n_i`` are summed; the accuracy is one minus the total divided by
    ``2c``. Every class ``1..c`` must occur in ``truth``.
    """
    cm = confusion_matrix(truth, pred, n_classes)
    counts = cm.counts.astype(np.float64)
    n_total = counts.sum()
    members = counts.sum(axis=1)
    if np.any(members == 0):
        missing = [i + 1 for i in np.flatnonzero(members == 0)]
        raise DegenerateClassError(f"classes {missing} do not occur in the ground truth")

    hits = np.diag(counts)
    false_pos = counts.sum(axis=0) - hits
    false_neg = members - hits
    others = n_total - members
    fp_rate = np.divide(false_pos, others, out=np.zeros_like(others), where=others > 0)
    fn_rate = false_neg / members
    return float(1.0 - np.sum(fp_rate + fn_rate) / (2 * cm.n_classes))


def accuracy(truth, pred) -> float:
    """Plain fraction of matching labels."""
    truth, pred = _check_labels(truth, pred)
    return float(np.mean(truth == pred))


def normalize(X) -> np.ndarray:
    """Standardises every feature to zero mean and unit population variance.

    Constant features are only centred.
    """
    try:
        X = np.asarray(X, dtype=np.float64)
    except ValueError as e:
        raise DimensionError(f"ragged sample matrix: {e}") from None
    if X.ndim != 2:
        raise DimensionError("expected a two-dimensional sample matrix")
    if X.shape[0] < 2:
        raise DimensionError("normalisation needs at least two samples")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    return (X - mean) / np.where(std > 0, std, 1.0)
