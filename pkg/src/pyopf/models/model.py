"""Trained-model container and its on-disk format.

Model files are little-endian and self-describing::

    b"OPFM"  uint32 format_version  uint32 header_length
    header (UTF-8 JSON: variant, metric, k_best, scalars, array manifest)
    raw arrays, in manifest order
    uint32 CRC-32 of everything above

Only the fitted graph is stored. Fit reports (which contain wall-clock
times) and precomputed distance matrices are not, so the same training
data always produces the same bytes.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from pyopf._io import atomic_write_bytes, atomic_write_text
from pyopf.core.subgraph import KNNSubgraph, Subgraph
from pyopf.exceptions import CorruptModelError, NotTrainedError, OPFError, VersionError

MAGIC = b"OPFM"
FORMAT_VERSION = 1
VARIANTS = ("supervised", "knn_supervised", "semi_supervised", "unsupervised")

_NODE_ARRAYS = (
    ("features", "<f8"),
    ("true_label", "<i8"),
    ("predicted_label", "<i8"),
    ("cost", "<f8"),
    ("density", "<f8"),
    ("predecessor", "<i8"),
    ("root", "<i8"),
    ("is_prototype", "|b1"),
    ("is_relevant", "|b1"),
    ("cluster_label", "<i8"),
)
_KNN_ARRAYS = (("adj_ptr", "<i8"), ("adj_index", "<i8"), ("adj_weight", "<f8"))
_KNN_SCALARS = ("k", "d_f", "rho_min", "rho_max", "n_clusters")


@dataclass
class FitReport:
    """What happened during a fit; kept in memory only."""

    training_time: float = 0.0
    n_prototypes: int = 0
    k_best: int | None = None
    n_clusters: int | None = None
    validation_accuracy: float | None = None
    diagnostics: dict = field(default_factory=dict)
    history: list = field(default_factory=list)


@dataclass(eq=False)
class TrainedModel:
    variant: str
    subgraph: Subgraph
    metric: str
    k_best: int = 0
    precomputed: np.ndarray | None = None
    report: FitReport | None = None
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise OPFError(f"unknown model variant {self.variant!r}")

    def check_trained(self) -> None:
        if not self.subgraph.trained:
            raise NotTrainedError("the model has not been fitted")

    def predict(self, X) -> np.ndarray:
        """Labels (or cluster ids for clustering models) for ``X``."""
        from pyopf.models import knn_supervised, supervised, unsupervised

        if self.variant in ("supervised", "semi_supervised"):
            return supervised.supervised_predict(self, X)
        if self.variant == "knn_supervised":
            return knn_supervised.knn_supervised_predict(self, X)
        return unsupervised.unsupervised_predict(self, X)

    def to_bytes(self) -> bytes:
        return dumps(self)


def _arrays(model: TrainedModel) -> list[tuple[str, str, np.ndarray]]:
    sg = model.subgraph
    out = [(name, dt, getattr(sg, name)) for name, dt in _NODE_ARRAYS]
    if sg.ordered_indices is not None:
        out.append(("ordered_indices", "<i8", np.asarray(sg.ordered_indices)))
    if isinstance(sg, KNNSubgraph):
        out.extend((name, dt, getattr(sg, name)) for name, dt in _KNN_ARRAYS)
    return out


def dumps(model: TrainedModel) -> bytes:
    """Serialises a trained model to bytes."""
    model.check_trained()
    sg = model.subgraph
    arrays = _arrays(model)
    header = {
        "variant": model.variant,
        "metric": model.metric,
        "k_best": int(model.k_best),
        "n_nodes": sg.n_nodes,
        "n_features": sg.n_features,
        "knn": {name: getattr(sg, name) for name in _KNN_SCALARS} if isinstance(sg, KNNSubgraph) else None,
        "arrays": [[name, dt, list(a.shape)] for name, dt, a in arrays],
    }
    head = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    parts = [MAGIC, struct.pack("<II", FORMAT_VERSION, len(head)), head]
    parts.extend(np.ascontiguousarray(a, dtype=dt).tobytes() for _, dt, a in arrays)
    blob = b"".join(parts)
    return blob + struct.pack("<I", zlib.crc32(blob))


def loads(data: bytes) -> TrainedModel:
    """Rebuilds a model serialised by :func:`dumps`."""
    if len(data) < 16 or data[:4] != MAGIC:
        raise CorruptModelError("not a model file (bad magic or too short)")
    version, head_len = struct.unpack_from("<II", data, 4)
    if version != FORMAT_VERSION:
        raise VersionError(f"model format version {version} is not supported (expected {FORMAT_VERSION})")
    (crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) != crc:
        raise CorruptModelError("checksum mismatch")
    try:
        header = json.loads(data[12:12 + head_len].decode("utf-8"))
        knn = header["knn"]
        n, m = header["n_nodes"], header["n_features"]
        sg = KNNSubgraph(np.zeros((n, m))) if knn is not None else Subgraph(np.zeros((n, m)))
        offset = 12 + head_len
        for name, dt, shape in header["arrays"]:
            count = int(np.prod(shape))
            arr = np.frombuffer(data, dtype=dt, count=count, offset=offset).reshape(shape)
            offset += arr.nbytes
            native = arr.astype(np.dtype(dt).newbyteorder("="))
            setattr(sg, name, native)
        if offset != len(data) - 4:
            raise CorruptModelError("payload size does not match the manifest")
        if knn is not None:
            for name in _KNN_SCALARS:
                setattr(sg, name, knn[name])
        sg.trained = True
        return TrainedModel(header["variant"], sg, header["metric"], header["k_best"], format_version=version)
    except (KeyError, TypeError, ValueError, UnicodeDecodeError) as e:
        if isinstance(e, OPFError):
            raise
        raise CorruptModelError(f"malformed model file: {e}") from None


def save_model(model: TrainedModel, path) -> None:
    atomic_write_bytes(path, dumps(model))


def load_model(path) -> TrainedModel:
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError:
        raise CorruptModelError(f"model file {path} not found") from None
    return loads(data)


def to_json(model: TrainedModel) -> dict:
    """Readable export for inspection; ``load_model`` does not read it."""
    sg = model.subgraph

    def plain(a):
        a = np.asarray(a)
        if a.dtype.kind == "f":
            return [v if np.isfinite(v) else str(v) for v in a.tolist()] if a.ndim == 1 else a.tolist()
        return a.tolist()

    doc = {
        "format_version": model.format_version,
        "variant": model.variant,
        "metric": model.metric,
        "k_best": model.k_best,
        "nodes": {name: plain(getattr(sg, name)) for name, _ in _NODE_ARRAYS},
    }
    if sg.ordered_indices is not None:
        doc["ordered_indices"] = plain(sg.ordered_indices)
    if isinstance(sg, KNNSubgraph):
        doc["knn"] = {name: getattr(sg, name) for name in _KNN_SCALARS}
        doc["adjacency"] = sg.adjacency
    return doc


def export_json(model: TrainedModel, path) -> None:
    atomic_write_text(path, json.dumps(to_json(model), indent=1))
