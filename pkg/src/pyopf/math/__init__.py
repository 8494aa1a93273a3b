"""Distances, metrics, normalisation and portable random numbers."""

from pyopf.math.distance import (
    METRICS,
    distance,
    pairwise_distances,
    pre_compute_distances,
    read_distance_matrix,
    write_distance_matrix,
)
from pyopf.math.general import ConfusionMatrix, accuracy, confusion_matrix, normalize, opf_accuracy
from pyopf.math.random import SplitMix64, rng_gaussian, rng_uniform

__all__ = [
    "METRICS",
    "ConfusionMatrix",
    "SplitMix64",
    "accuracy",
    "confusion_matrix",
    "distance",
    "normalize",
    "opf_accuracy",
    "pairwise_distances",
    "pre_compute_distances",
    "read_distance_matrix",
    "rng_gaussian",
    "rng_uniform",
    "write_distance_matrix",
]
