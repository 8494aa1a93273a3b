"""The binary OPF dataset layout.

All integers are 32-bit little-endian and features are IEEE-754 float32::

    n_samples n_classes n_features           (header, 12 bytes)
    id label f_1 ... f_m                      (repeated n_samples times)
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from pyopf._io import atomic_write_bytes
from pyopf.dataset.dataset import Dataset
from pyopf.exceptions import LabelError, ParseError

HEADER = struct.Struct("<iii")


def _record_dtype(n_features: int) -> np.dtype:
    return np.dtype([("id", "<i4"), ("label", "<i4"), ("features", "<f4", (n_features,))])


def decode_opf_binary(data: bytes, path=None) -> Dataset:
    if len(data) < HEADER.size:
        raise ParseError("truncated header", path=path, offset=len(data))
    n, c, m = HEADER.unpack_from(data, 0)
    if n <= 0 or c <= 0 or m <= 0:
        raise ParseError(f"header counts must be positive, got ({n}, {c}, {m})", path=path, offset=0)
    dtype = _record_dtype(m)
    body = len(data) - HEADER.size
    complete = body // dtype.itemsize
    if complete < n:
        offset = HEADER.size + complete * dtype.itemsize
        raise ParseError(f"file ends inside sample {complete} of {n}", path=path, offset=offset, sample=complete)
    if body != n * dtype.itemsize:
        offset = HEADER.size + n * dtype.itemsize
        raise ParseError(f"{body - n * dtype.itemsize} trailing bytes after {n} samples", path=path, offset=offset)
    rec = np.frombuffer(data, dtype=dtype, count=n, offset=HEADER.size)
    labels = rec["label"].astype(np.int64)
    if np.any(labels < 0):
        bad = int(np.flatnonzero(labels < 0)[0])
        raise ParseError("negative label", path=path, offset=HEADER.size + bad * dtype.itemsize + 4, sample=bad)
    return Dataset(rec["id"].astype(np.int64), labels, rec["features"].astype(np.float64), c)


def encode_opf_binary(ds: Dataset) -> bytes:
    c = ds.n_classes or 0
    if ds.n_samples == 0 or ds.n_features == 0 or c <= 0:
        raise LabelError("binary OPF files need at least one sample, feature and class")
    if np.any(ds.labels < 1) or np.any(ds.labels > c):
        raise LabelError(f"binary OPF files need labels in 1..{c}; unlabeled samples are not representable")
    rec = np.empty(ds.n_samples, dtype=_record_dtype(ds.n_features))
    rec["id"] = ds.ids
    rec["label"] = ds.labels
    rec["features"] = ds.features.astype(np.float32)
    return HEADER.pack(ds.n_samples, c, ds.n_features) + rec.tobytes()


def read_opf_binary(path) -> Dataset:
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise ParseError("file not found", path=path) from None
    return decode_opf_binary(data, path)


def write_opf_binary(ds: Dataset, path) -> None:
    atomic_write_bytes(path, encode_opf_binary(ds))
