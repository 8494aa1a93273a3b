"""Command-line interface: ``pyopf <command> ...``.

Exit codes: 0 on success, 2 for usage or data errors, 1 for anything
unexpected. Output files are written atomically, so a failing command
leaves no partial output behind.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from pyopf import __version__
from pyopf._io import atomic_write_text
from pyopf.dataset import FORMATS, infer_format, load, save, split
from pyopf.exceptions import OPFError
from pyopf.math.distance import METRICS, pre_compute_distances, read_distance_matrix, write_distance_matrix
from pyopf.math.general import confusion_matrix, opf_accuracy
from pyopf.models import (
    agglomerative_learn,
    knn_supervised_fit,
    learn,
    load_model,
    prune,
    save_model,
    semi_supervised_fit,
    supervised_fit,
    unsupervised_fit,
)

logger = logging.getLogger("pyopf.cli")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2
_LEVEL_NAMES = {"WARNING": "warn", "CRITICAL": "error"}


class UsageError(Exception):
    """Inconsistent command-line options."""


class _StageFilter(logging.Filter):
    def __init__(self, stage: str):
        super().__init__()
        self.stage = stage

    def filter(self, record):
        if not hasattr(record, "stage"):
            record.stage = self.stage
        record.level = _LEVEL_NAMES.get(record.levelname, record.levelname.lower())
        return True


class _JsonFormatter(logging.Formatter):
    def format(self, record):
        return json.dumps({
            "time": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "level": record.level,
            "stage": record.stage,
            "message": record.getMessage(),
        })


def _setup_logging(args) -> list[logging.Handler]:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    if args.log_json:
        fmt = _JsonFormatter()
    else:
        fmt = logging.Formatter("%(asctime)s %(level)s [%(stage)s] %(message)s", "%Y-%m-%d %H:%M:%S")
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if args.log_file:
        handlers.append(logging.FileHandler(args.log_file, encoding="utf-8"))
    root = logging.getLogger("pyopf")
    root.setLevel(level)
    for h in handlers:
        h.setFormatter(fmt)
        h.addFilter(_StageFilter(args.command))
        root.addHandler(h)
    return handlers


def _write_assignments(path, ids, values, as_json: bool, key: str) -> None:
    if as_json:
        text = json.dumps([{"id": int(i), key: int(v)} for i, v in zip(ids, values)]) + "\n"
    else:
        text = "".join(f"{int(i)} {int(v)}\n" for i, v in zip(ids, values))
    atomic_write_text(path, text)


def read_assignments(path) -> tuple[np.ndarray, np.ndarray]:
    """Reads an ``id label`` file (plain two-column text or JSON)."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("["):
        rows = json.loads(text)
        pairs = [(r["id"], next(v for k, v in r.items() if k != "id")) for r in rows]
    else:
        pairs = []
        for no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != 2:
                raise OPFError(f"{path}: line {no}: expected 'id label'")
            pairs.append((int(fields[0]), int(fields[1])))
    if not pairs:
        raise OPFError(f"{path}: no assignments")
    ids, values = zip(*pairs)
    return np.asarray(ids, dtype=np.int64), np.asarray(values, dtype=np.int64)


# -- commands -----------------------------------------------------------------

def cmd_convert(args) -> int:
    ds = load(args.input, args.in_format)
    save(ds, args.output, args.out_format)
    logger.info("converted %s (%d samples) to %s", args.input, ds.n_samples, args.output)
    return EXIT_OK


def cmd_split(args) -> int:
    ds = load(args.input, args.format)
    first, second = split(ds, args.percentage, args.seed)
    fmt = args.format or infer_format(args.input)
    save(first, args.out_train, fmt)
    save(second, args.out_test, fmt)
    logger.info("split %d samples into %d and %d", ds.n_samples, first.n_samples, second.n_samples)
    return EXIT_OK


def cmd_distances(args) -> int:
    ds = load(args.input, args.format)
    write_distance_matrix(pre_compute_distances(ds.features, args.metric), args.output)
    logger.info("wrote %dx%d %s distance matrix to %s", ds.n_samples, ds.n_samples, args.metric, args.output)
    return EXIT_OK


def _check_train_options(args) -> None:
    needs_val = args.variant == "knn_supervised" or args.strategy != "plain"
    if needs_val and not args.val:
        raise UsageError(f"--val is required for variant {args.variant!r} with strategy {args.strategy!r}")
    if args.strategy != "plain" and args.variant != "supervised":
        raise UsageError("--strategy other than 'plain' applies to the supervised variant only")
    if args.precomputed and (args.variant != "supervised" or args.strategy != "plain"):
        raise UsageError("--precomputed applies to plain supervised training only")
    if args.variant in ("knn_supervised", "unsupervised") and args.k_max is None:
        raise UsageError(f"--k-max is required for variant {args.variant!r}")


def cmd_train(args) -> int:
    _check_train_options(args)
    metric = args.metric or ("log_squared_euclidean" if args.variant in ("supervised", "semi_supervised")
                             else "euclidean")
    ds = load(args.input, args.format)
    X, Y = ds.features, ds.labels
    val = load(args.val, args.val_format) if args.val else None

    if args.variant == "supervised":
        if args.strategy == "plain":
            D = read_distance_matrix(args.precomputed) if args.precomputed else None
            model = supervised_fit(X, Y, metric, precomputed=D)
        elif args.strategy == "learn":
            model = learn(X, Y, val.features, val.labels, args.iterations, metric, seed=args.seed)
        elif args.strategy == "agglomerative":
            model = agglomerative_learn(X, Y, val.features, val.labels, metric)
        else:
            model = prune(X, Y, val.features, val.labels, args.max_loss, args.iterations, metric)
    elif args.variant == "knn_supervised":
        model = knn_supervised_fit(X, Y, val.features, val.labels, args.k_max, metric)
    elif args.variant == "semi_supervised":
        labelled = Y > 0
        model = semi_supervised_fit(X[labelled], Y[labelled], X[~labelled], metric)
    else:
        model = unsupervised_fit(X, args.k_max, metric)

    save_model(model, args.model_out)
    r = model.report
    logger.info("fit report: time=%.4fs prototypes=%d k_best=%s clusters=%s validation_accuracy=%s",
                r.training_time, r.n_prototypes, r.k_best, r.n_clusters, r.validation_accuracy)
    logger.info("model written to %s", args.model_out)
    return EXIT_OK


def cmd_predict(args) -> int:
    model = load_model(args.model)
    ds = load(args.input, args.format)
    preds = model.predict(ds.features)
    key = "cluster" if model.variant == "unsupervised" else "label"
    _write_assignments(args.out, ds.ids, preds, args.json, key)
    logger.info("predicted %d samples with a %s model", ds.n_samples, model.variant)
    return EXIT_OK


def cmd_cluster(args) -> int:
    ds = load(args.input, args.format)
    model = unsupervised_fit(ds.features, args.k_max, args.metric)
    _write_assignments(args.out, ds.ids, model.subgraph.cluster_label, args.json, "cluster")
    if args.model_out:
        save_model(model, args.model_out)
    logger.info("found %d clusters (k_best=%d)", model.subgraph.n_clusters, model.k_best)
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.truth_format:
        ds = load(args.truth, args.truth_format)
        t_ids, truth = ds.ids, ds.labels
    else:
        t_ids, truth = read_assignments(args.truth)
    p_ids, pred = read_assignments(args.preds)
    lookup = dict(zip(p_ids.tolist(), pred.tolist()))
    missing = [i for i in t_ids.tolist() if i not in lookup]
    if missing or len(lookup) != len(t_ids):
        raise OPFError(f"prediction ids do not match the ground truth ids ({len(missing)} missing)")
    pred = np.array([lookup[i] for i in t_ids.tolist()])

    acc = opf_accuracy(truth, pred)
    cm = confusion_matrix(truth, pred)
    if args.json:
        print(json.dumps({"opf_accuracy": acc, "confusion_matrix": cm.counts.tolist()}))
    else:
        print(f"opf_accuracy {acc:.6f}")
        print("confusion_matrix (rows: true label, columns: predicted label)")
        for row in cm.counts:
            print(" ".join(str(v) for v in row))
    logger.info("opf_accuracy %.6f over %d samples", acc, truth.size)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pyopf", description="Optimum-Path Forest classifiers.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = p.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log debug records")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    p.add_argument("--log-file", help="also append log records to this file")
    p.add_argument("--log-json", action="store_true", help="emit log records as JSON lines")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert a dataset between txt, csv, json and opf")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--in-format", choices=FORMATS)
    c.add_argument("--out-format", choices=FORMATS)
    c.set_defaults(func=cmd_convert)

    s = sub.add_parser("split", help="split a dataset into two seeded random parts")
    s.add_argument("input")
    s.add_argument("--format", choices=FORMATS)
    s.add_argument("--percentage", type=float, required=True, help="fraction going to the first part")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-train", required=True)
    s.add_argument("--out-test", required=True)
    s.set_defaults(func=cmd_split)

    d = sub.add_parser("distances", help="precompute the pairwise distance matrix of a dataset")
    d.add_argument("input")
    d.add_argument("output")
    d.add_argument("--format", choices=FORMATS)
    d.add_argument("--metric", choices=METRICS, default="log_squared_euclidean")
    d.set_defaults(func=cmd_distances)

    t = sub.add_parser("train", help="fit a model and save it")
    t.add_argument("input")
    t.add_argument("--format", choices=FORMATS)
    t.add_argument("--variant", default="supervised",
                   choices=("supervised", "knn_supervised", "semi_supervised", "unsupervised"))
    t.add_argument("--metric", choices=METRICS)
    t.add_argument("--strategy", default="plain", choices=("plain", "learn", "agglomerative", "prune"))
    t.add_argument("--val", help="validation dataset")
    t.add_argument("--val-format", choices=FORMATS)
    t.add_argument("--k-max", type=int)
    t.add_argument("--max-loss", type=float, default=0.01)
    t.add_argument("--iterations", type=int, default=10)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--precomputed", help="distance matrix written by 'pyopf distances'")
    t.add_argument("--model-out", required=True)
    t.set_defaults(func=cmd_train)

    r = sub.add_parser("predict", help="label a dataset with a saved model")
    r.add_argument("model")
    r.add_argument("input")
    r.add_argument("--format", choices=FORMATS)
    r.add_argument("--out", required=True)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_predict)

    k = sub.add_parser("cluster", help="cluster a dataset with the unsupervised OPF")
    k.add_argument("input")
    k.add_argument("--format", choices=FORMATS)
    k.add_argument("--k-max", type=int, required=True)
    k.add_argument("--metric", choices=METRICS, default="euclidean")
    k.add_argument("--out", required=True)
    k.add_argument("--model-out")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_cluster)

    e = sub.add_parser("eval", help="score predictions against the ground truth")
    e.add_argument("truth", help="'id label' file, or a dataset with --truth-format")
    e.add_argument("preds")
    e.add_argument("--truth-format", choices=FORMATS)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    handlers = _setup_logging(args)
    start = time.perf_counter()
    logger.info("start %s", args.command)
    try:
        code = args.func(args)
    except UsageError as e:
        logger.error("usage error: %s", e)
        code = EXIT_USAGE
    except (OPFError, OSError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        code = EXIT_USAGE
    except Exception:
        logger.exception("internal error")
        code = EXIT_INTERNAL
    logger.info("end %s (exit %d, %.3fs)", args.command, code, time.perf_counter() - start)
    root = logging.getLogger("pyopf")
    for h in handlers:
        root.removeHandler(h)
        h.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
