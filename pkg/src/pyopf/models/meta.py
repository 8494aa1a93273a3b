"""Training procedures wrapped around the supervised classifier."""

from __future__ import annotations

import logging

import numpy as np

from pyopf.exceptions import OPFError, SingleClassError, TooSmallError
from pyopf.math.general import opf_accuracy
from pyopf.math.random import SplitMix64
from pyopf.models.model import TrainedModel
from pyopf.models.supervised import (
    DEFAULT_METRIC,
    as_samples,
    check_labels,
    supervised_classify,
    supervised_fit,
    supervised_predict,
)

logger = logging.getLogger(__name__)


def _prepare(X_tr, Y_tr, X_val, Y_val):
    X_tr = as_samples(X_tr)
    Y_tr = check_labels(X_tr, Y_tr)
    X_val = as_samples(X_val, X_tr.shape[1])
    Y_val = check_labels(X_val, Y_val)
    return X_tr.copy(), Y_tr.copy(), X_val.copy(), Y_val.copy()


def learn(X_tr, Y_tr, X_val, Y_val, n_iterations: int = 10, metric: str = DEFAULT_METRIC,
          seed: int = 0) -> TrainedModel:
    """Keeps the best of several fits, swapping in misclassified validation samples.

    After each fit every misclassified validation sample trades places with
    a randomly drawn non-prototype training sample, preferring one of the
    same class. The loop stops at ``n_iterations`` or perfect validation
    accuracy; the best model seen is returned with its accuracy in
    ``report.validation_accuracy``.
    """
    if n_iterations < 1:
        raise OPFError("n_iterations must be at least 1")
    X_tr, Y_tr, X_val, Y_val = _prepare(X_tr, Y_tr, X_val, Y_val)
    rng = SplitMix64(seed)
    best, best_acc, history = None, -1.0, []

    for it in range(n_iterations):
        model = supervised_fit(X_tr, Y_tr, metric)
        preds = supervised_predict(model, X_val)
        acc = opf_accuracy(Y_val, preds)
        history.append(acc)
        logger.info("learn iteration %d: validation accuracy %.4f", it + 1, acc)
        if acc > best_acc:
            best, best_acc = model, acc
        if acc == 1.0 or it == n_iterations - 1:
            break

        free = np.flatnonzero(~model.subgraph.is_prototype)
        for j in np.flatnonzero(preds != Y_val):
            if free.size == 0:
                break
            same = free[Y_tr[free] == Y_val[j]]
            pool = same if same.size else free
            i = int(pool[rng.integers(pool.size, 1)[0]])
            free = free[free != i]
            X_tr[i], X_val[j] = X_val[j].copy(), X_tr[i].copy()
            Y_tr[i], Y_val[j] = Y_val[j], Y_tr[i]

    best.report.validation_accuracy = best_acc
    best.report.history = history
    return best


def agglomerative_learn(X_tr, Y_tr, X_val, Y_val, metric: str = DEFAULT_METRIC) -> TrainedModel:
    """Moves misclassified validation samples into the training set until none
    remain (or the validation set is used up), refitting each round."""
    X_tr, Y_tr, X_val, Y_val = _prepare(X_tr, Y_tr, X_val, Y_val)
    errors = []
    while True:
        model = supervised_fit(X_tr, Y_tr, metric)
        if X_val.shape[0] == 0:
            break
        wrong = supervised_predict(model, X_val) != Y_val
        errors.append(int(wrong.sum()))
        logger.info("agglomerative round %d: %d validation errors, %d training samples",
                    len(errors), errors[-1], X_tr.shape[0])
        if not wrong.any():
            break
        X_tr = np.vstack([X_tr, X_val[wrong]])
        Y_tr = np.concatenate([Y_tr, Y_val[wrong]])
        X_val, Y_val = X_val[~wrong], Y_val[~wrong]

    model.report.history = errors
    model.report.diagnostics["n_training"] = X_tr.shape[0]
    model.report.diagnostics["n_validation_left"] = X_val.shape[0]
    return model


def relevant_nodes(model: TrainedModel, X_val) -> np.ndarray:
    """Marks every training node lying on an optimum path used to classify ``X_val``."""
    sg = model.subgraph
    relevant = np.zeros(sg.n_nodes, dtype=bool)
    for s in np.unique(supervised_classify(model, X_val).conqueror):
        relevant[sg.path_to_root(int(s))] = True
    sg.is_relevant[:] = relevant
    return relevant


def prune(X_tr, Y_tr, X_val, Y_val, max_loss: float = 0.01, n_iterations: int = 10,
          metric: str = DEFAULT_METRIC) -> TrainedModel:
    """Drops training nodes that no validation sample's optimum path uses.

    Each round refits on the relevant nodes only. A round whose validation
    accuracy falls below ``baseline - max_loss`` is undone and ends the loop;
    so does a round that removes nothing. ``report.diagnostics["kept"]``
    lists the surviving rows of ``X_tr``.
    """
    if not 0.0 <= max_loss < 1.0:
        raise OPFError(f"max_loss must lie in [0, 1), got {max_loss}")
    if n_iterations < 1:
        raise OPFError("n_iterations must be at least 1")
    X_tr, Y_tr, X_val, Y_val = _prepare(X_tr, Y_tr, X_val, Y_val)

    model = supervised_fit(X_tr, Y_tr, metric)
    baseline = acc = opf_accuracy(Y_val, supervised_predict(model, X_val))
    keep = np.arange(X_tr.shape[0])
    history = [(keep.size, acc)]

    for it in range(n_iterations):
        relevant = relevant_nodes(model, X_val)
        if relevant.all():
            break
        candidate_keep = keep[relevant]
        try:
            candidate = supervised_fit(X_tr[candidate_keep], Y_tr[candidate_keep], metric)
        except (SingleClassError, TooSmallError):
            break
        candidate_acc = opf_accuracy(Y_val, supervised_predict(candidate, X_val))
        logger.info("prune round %d: %d -> %d nodes, accuracy %.4f", it + 1, keep.size,
                    candidate_keep.size, candidate_acc)
        if candidate_acc < baseline - max_loss:
            break
        model, keep, acc = candidate, candidate_keep, candidate_acc
        history.append((keep.size, acc))

    model.report.validation_accuracy = acc
    model.report.history = history
    model.report.diagnostics.update(baseline_accuracy=baseline, kept=keep.tolist(),
                                    n_pruned=X_tr.shape[0] - keep.size)
    return model
