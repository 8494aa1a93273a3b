"""The Dataset container moved through loading, splitting and conversion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pyopf.exceptions import DimensionError, LabelError


@dataclass(eq=False)
class Dataset:
    """Samples with ids, labels (0 = unlabeled) and a feature matrix.

    ``n_classes`` is the class count declared by the source file; when
    omitted it defaults to the largest label.
    """

    ids: np.ndarray
    labels: np.ndarray
    features: np.ndarray
    n_classes: int | None = None

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64).reshape(-1)
        self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        try:
            self.features = np.asarray(self.features, dtype=np.float64)
        except ValueError as e:
            raise DimensionError(f"ragged feature matrix: {e}") from None
        if self.features.ndim == 1 and self.ids.size:
            self.features = self.features.reshape(self.ids.size, -1)
        if self.features.ndim != 2:
            raise DimensionError("features must form a 2-D matrix")
        n = self.features.shape[0]
        if self.ids.size != n or self.labels.size != n:
            raise DimensionError(
                f"{self.ids.size} ids and {self.labels.size} labels for {n} feature rows"
            )
        if np.any(self.labels < 0):
            raise LabelError("labels must be non-negative")
        if self.n_classes is None:
            self.n_classes = int(self.labels.max()) if n else 0

    @classmethod
    def from_arrays(cls, X, Y=None, n_classes: int | None = None) -> "Dataset":
        X = np.asarray(X, dtype=np.float64)
        Y = np.zeros(X.shape[0], dtype=np.int64) if Y is None else Y
        return cls(np.arange(X.shape[0]), Y, X, n_classes)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def __len__(self) -> int:
        return self.n_samples

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.ids[indices], self.labels[indices], self.features[indices], self.n_classes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.n_classes == other.n_classes
            and np.array_equal(self.ids, other.ids)
            and np.array_equal(self.labels, other.labels)
            and self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features)
        )

    def __repr__(self) -> str:
        return f"Dataset(n_samples={self.n_samples}, n_features={self.n_features}, n_classes={self.n_classes})"
