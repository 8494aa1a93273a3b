"""Text, CSV and JSON dataset files.

Text and CSV share one layout: a header ``n_samples n_classes n_features``
followed by one ``id label f_1 ... f_m`` line per sample (CSV separates with
commas). JSON files hold ``{"n_classes": c, "data": [{"id", "label",
"features"}, ...]}``. Floats are written with Python's shortest round-trip
representation.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np

from pyopf._io import atomic_write_text
from pyopf.dataset.dataset import Dataset
from pyopf.dataset.opf_binary import read_opf_binary, write_opf_binary
from pyopf.exceptions import ParseError

logger = logging.getLogger(__name__)

FORMATS = ("txt", "csv", "json", "opf")


def infer_format(path) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix == "dat":
        return "opf"
    if suffix not in FORMATS:
        raise ParseError(f"cannot infer the format from extension {suffix!r}", path=path)
    return suffix


def _reindex(ids: np.ndarray, path) -> np.ndarray:
    n = ids.size
    if np.array_equal(np.sort(ids), np.arange(n)):
        return ids
    logger.info("%s: ids are not a permutation of 0..%d; re-indexing in file order", path, n - 1)
    return np.arange(n, dtype=np.int64)


def _split_fields(line: str, sep: str | None) -> list[str]:
    if sep is None:
        return line.split()
    return [f.strip() for f in line.split(sep)]


def _parse_delimited(text: str, sep: str | None, path) -> Dataset:
    lines = [(no, ln) for no, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ParseError("empty file", path=path, line=1)
    head_no, head = lines[0]
    fields = _split_fields(head, sep)
    try:
        n, c, m = (int(f) for f in fields)
    except ValueError:
        raise ParseError(f"malformed header {head.strip()!r}; expected 'n_samples n_classes n_features'",
                         path=path, line=head_no) from None
    if n <= 0 or m <= 0 or c < 0:
        raise ParseError(f"invalid header counts ({n}, {c}, {m})", path=path, line=head_no)

    body = lines[1:]
    if len(body) != n:
        line = body[-1][0] + 1 if len(body) < n and body else (body[n][0] if body else head_no + 1)
        raise ParseError(f"header declares {n} samples but the body has {len(body)}", path=path, line=line)

    ids = np.empty(n, dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    features = np.empty((n, m), dtype=np.float64)
    for i, (no, ln) in enumerate(body):
        fields = _split_fields(ln, sep)
        if len(fields) != m + 2:
            raise ParseError(f"expected {m + 2} fields, found {len(fields)}", path=path, line=no, sample=i)
        try:
            ids[i] = int(fields[0])
            labels[i] = int(fields[1])
        except ValueError:
            raise ParseError("id and label must be integers", path=path, line=no, sample=i) from None
        try:
            features[i] = [float(f) for f in fields[2:]]
        except ValueError as e:
            raise ParseError(f"non-numeric feature: {e}", path=path, line=no, sample=i) from None
        if labels[i] < 0:
            raise ParseError("negative label", path=path, line=no, sample=i)
    return Dataset(_reindex(ids, path), labels, features, c)


def _parse_json(text: str, path) -> Dataset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", path=path, line=e.lineno) from None
    if not isinstance(doc, dict) or "data" not in doc or not isinstance(doc["data"], list):
        raise ParseError("expected an object with a 'data' array", path=path)
    records = doc["data"]
    if not records:
        raise ParseError("no samples", path=path)
    n = len(records)
    ids = np.empty(n, dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    m = None
    for i, rec in enumerate(records):
        try:
            row = [float(v) for v in rec["features"]]
            ids[i] = int(rec["id"])
            labels[i] = int(rec["label"])
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed sample record: {e!r}", path=path, sample=i) from None
        if m is None:
            m = len(row)
            features = np.empty((n, m))
        if len(row) != m:
            raise ParseError(f"expected {m} features, found {len(row)}", path=path, sample=i)
        features[i] = row
    if m == 0 or np.any(labels < 0):
        raise ParseError("samples need features and non-negative labels", path=path)
    c = int(doc.get("n_classes", labels.max()))
    return Dataset(_reindex(ids, path), labels, features, c)


def parse(text: str, format: str, path=None) -> Dataset:
    if format == "txt":
        return _parse_delimited(text, None, path)
    if format == "csv":
        return _parse_delimited(text, ",", path)
    if format == "json":
        return _parse_json(text, path)
    raise ParseError(f"unsupported text format {format!r}", path=path)


def load(path, format: str | None = None) -> Dataset:
    """Loads a dataset file.

    Args:
        path: File to read.
        format: One of ``txt``, ``csv``, ``json`` or ``opf``; inferred from
            the extension when omitted.
    """
    format = format or infer_format(path)
    if format == "opf":
        ds = read_opf_binary(path)
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ParseError("file not found", path=path) from None
        ds = parse(text, format, path)
    logger.debug("loaded %s: %d samples, %d features", path, ds.n_samples, ds.n_features)
    return ds


def _fmt(x: float) -> str:
    return repr(float(x))


def render(ds: Dataset, format: str) -> str:
    if format in ("txt", "csv"):
        sep = " " if format == "txt" else ","
        out = [sep.join(str(v) for v in (ds.n_samples, ds.n_classes, ds.n_features))]
        for i in range(ds.n_samples):
            row = [str(int(ds.ids[i])), str(int(ds.labels[i]))] + [_fmt(x) for x in ds.features[i]]
            out.append(sep.join(row))
        return "\n".join(out) + "\n"
    if format == "json":
        doc = {
            "n_classes": int(ds.n_classes),
            "data": [
                {"id": int(ds.ids[i]), "label": int(ds.labels[i]), "features": [float(x) for x in ds.features[i]]}
                for i in range(ds.n_samples)
            ],
        }
        return json.dumps(doc) + "\n"
    raise ParseError(f"unsupported text format {format!r}")


def save(ds: Dataset, path, format: str | None = None) -> None:
    """Writes ``ds`` in the requested format (inferred from the extension)."""
    format = format or infer_format(path)
    if format == "opf":
        write_opf_binary(ds, path)
    else:
        atomic_write_text(path, render(ds, format))


def convert(src_path, src_format: str | None, dst_path, dst_format: str | None) -> None:
    save(load(src_path, src_format), dst_path, dst_format)
