"""Distance metrics.

Every distance in the library is computed by :func:`pairwise_distances`;
the scalar :func:`distance` and :func:`pre_compute_distances` are thin
wrappers around it. Training with a precomputed matrix is therefore
bit-identical to training with distances computed on the fly.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from pyopf.exceptions import DimensionError, OPFError, ParseError, UndefinedMetricError

LOG_SQUARED_SCALE = 100000.0

METRICS = (
    "euclidean",
    "squared_euclidean",
    "log_squared_euclidean",
    "manhattan",
    "chebyshev",
    "canberra",
    "chi_squared",
    "cosine",
)

# rows per block so a block's broadcast difference stays around 32 MB
_BLOCK_ELEMENTS = 1 << 22


def check_metric(metric: str) -> str:
    if metric not in METRICS:
        raise OPFError(f"unknown distance metric {metric!r}; expected one of {', '.join(METRICS)}")
    return metric


def _ratio_sum(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # 0/0 terms contribute 0
    zero = den == 0
    if np.any(zero & (num != 0)):
        raise UndefinedMetricError("denominator vanishes for a non-zero term")
    return np.sum(np.where(zero, 0.0, num / np.where(zero, 1.0, den)), axis=-1)


def _block(metric: str, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if metric == "cosine":
        dot = np.sum(A[:, None, :] * B[None, :, :], axis=-1)
        na = np.sum(A * A, axis=-1)
        nb = np.sum(B * B, axis=-1)
        if np.any(na == 0) or np.any(nb == 0):
            raise UndefinedMetricError("cosine distance is undefined for a zero vector")
        # sqrt(na * nb) rather than sqrt(na) * sqrt(nb): exact 0 on identical rows
        out = 1.0 - dot / np.sqrt(na[:, None] * nb[None, :])
        return np.clip(out, 0.0, 2.0)

    diff = A[:, None, :] - B[None, :, :]
    if metric == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=-1))
    if metric == "squared_euclidean":
        return np.sum(diff * diff, axis=-1)
    if metric == "log_squared_euclidean":
        return LOG_SQUARED_SCALE * np.log1p(np.sum(diff * diff, axis=-1))
    if metric == "manhattan":
        return np.sum(np.abs(diff), axis=-1)
    if metric == "chebyshev":
        return np.max(np.abs(diff), axis=-1)
    if metric == "canberra":
        den = np.abs(A)[:, None, :] + np.abs(B)[None, :, :]
        return _ratio_sum(np.abs(diff), den)
    if metric == "chi_squared":
        den = A[:, None, :] + B[None, :, :]
        if np.any((den < 0) | ((den == 0) & (diff != 0))):
            raise UndefinedMetricError("chi-squared distance needs non-negative features")
        return 0.5 * _ratio_sum(diff * diff, den)
    raise OPFError(f"unknown distance metric {metric!r}")


def pairwise_distances(metric: str, A, B) -> np.ndarray:
    """Computes the ``len(A) x len(B)`` matrix of distances.

    Args:
        metric: One of :data:`METRICS`.
        A: Sample matrix of shape ``(n, m)``.
        B: Sample matrix of shape ``(p, m)``.

    Returns:
        A float64 array of shape ``(n, p)``.
    """
    check_metric(metric)
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.ndim != 2 or B.ndim != 2:
        raise DimensionError("sample matrices must be two-dimensional")
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"feature dimensions differ: {A.shape[1]} != {B.shape[1]}")
    if A.shape[1] < 1:
        raise DimensionError("samples need at least one feature")

    out = np.empty((A.shape[0], B.shape[0]))
    step = max(1, _BLOCK_ELEMENTS // max(1, B.shape[0] * A.shape[1]))
    for start in range(0, A.shape[0], step):
        out[start:start + step] = _block(metric, A[start:start + step], B)
    return out


def distance(metric: str, u, v) -> float:
    """Distance between two vectors of equal length."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape:
        raise DimensionError(f"vectors must be 1-D and of equal length, got {u.shape} and {v.shape}")
    return float(pairwise_distances(metric, u[None, :], v[None, :])[0, 0])


def pre_compute_distances(X, metric: str = "log_squared_euclidean") -> np.ndarray:
    """Full pairwise matrix of a sample set, with an exactly zero diagonal."""
    try:
        X = np.asarray(X, dtype=np.float64)
    except ValueError as e:
        raise DimensionError(f"ragged sample matrix: {e}") from None
    if X.ndim != 2 or X.shape[0] < 1:
        raise DimensionError("expected a non-empty two-dimensional sample matrix")
    D = pairwise_distances(metric, X, X)
    np.fill_diagonal(D, 0.0)
    return D


def check_distance_matrix(D, n: int) -> np.ndarray:
    D = np.asarray(D, dtype=np.float64)
    if D.shape != (n, n):
        raise DimensionError(f"distance matrix must be {n}x{n}, got {D.shape}")
    return D


# Matrix file: int32 LE n, then n*n float64 LE in row-major order.

def write_distance_matrix(D, path) -> None:
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DimensionError("distance matrix must be square")
    with open(path, "wb") as f:
        f.write(struct.pack("<i", D.shape[0]))
        f.write(D.astype("<f8").tobytes())


def read_distance_matrix(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 4:
        raise ParseError("truncated distance matrix header", path=path, offset=len(data))
    (n,) = struct.unpack_from("<i", data, 0)
    if n < 1:
        raise ParseError(f"invalid matrix size {n}", path=path, offset=0)
    expected = 4 + 8 * n * n
    if len(data) != expected:
        raise ParseError(f"expected {expected} bytes, found {len(data)}", path=path, offset=min(len(data), expected))
    return np.frombuffer(data, dtype="<f8", offset=4).reshape(n, n).astype(np.float64)
