"""Seeded, non-stratified train/test splitting."""

from __future__ import annotations

import numpy as np

from pyopf.dataset.dataset import Dataset
from pyopf.exceptions import TooSmallError
from pyopf.math.random import SplitMix64


def split_sizes(n: int, percentage: float) -> tuple[int, int]:
    """Sizes of both parts; the first is ``round(percentage * n)``, half to even."""
    if not 0.0 < percentage < 1.0:
        raise TooSmallError(f"percentage must lie in (0, 1), got {percentage}")
    first = round(percentage * n)
    if first < 1 or n - first < 1:
        raise TooSmallError(f"splitting {n} samples at {percentage} leaves an empty part")
    return first, n - first


def split_indices(n: int, percentage: float, random_state: int) -> tuple[np.ndarray, np.ndarray]:
    first, _ = split_sizes(n, percentage)
    perm = SplitMix64(random_state).permutation(n)
    return perm[:first], perm[first:]


def split(ds: Dataset, percentage: float, random_state: int = 0) -> tuple[Dataset, Dataset]:
    """Shuffles ``ds`` with the seeded generator and cuts it in two."""
    a, b = split_indices(ds.n_samples, percentage, random_state)
    return ds.subset(a), ds.subset(b)


def split_arrays(X, Y, percentage: float, random_state: int = 0):
    """Array flavour of :func:`split`: returns ``X_1, X_2, Y_1, Y_2``."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    a, b = split_indices(X.shape[0], percentage, random_state)
    return X[a], X[b], Y[a], Y[b]
