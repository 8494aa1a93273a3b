"""Optimum-Path Forest classifiers.

Supervised (complete graph), kNN-supervised, semi-supervised and
unsupervised OPF, with the dataset formats, distances and metrics around
them.
"""

import logging

from pyopf.models import (
    TrainedModel,
    knn_supervised_fit,
    load_model,
    save_model,
    semi_supervised_fit,
    supervised_fit,
    unsupervised_fit,
)

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "TrainedModel",
    "knn_supervised_fit",
    "load_model",
    "save_model",
    "semi_supervised_fit",
    "supervised_fit",
    "unsupervised_fit",
]
