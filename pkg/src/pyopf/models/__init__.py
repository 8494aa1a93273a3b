"""OPF classifiers, training procedures and model persistence."""

from pyopf.models.knn_supervised import knn_supervised_fit, knn_supervised_predict
from pyopf.models.meta import agglomerative_learn, learn, prune
from pyopf.models.model import (
    FORMAT_VERSION,
    FitReport,
    TrainedModel,
    dumps,
    export_json,
    load_model,
    loads,
    save_model,
    to_json,
)
from pyopf.models.semi_supervised import semi_supervised_fit
from pyopf.models.supervised import supervised_classify, supervised_fit, supervised_predict
from pyopf.models.unsupervised import unsupervised_fit, unsupervised_predict

__all__ = [
    "FORMAT_VERSION",
    "FitReport",
    "TrainedModel",
    "agglomerative_learn",
    "dumps",
    "export_json",
    "knn_supervised_fit",
    "knn_supervised_predict",
    "learn",
    "load_model",
    "loads",
    "prune",
    "save_model",
    "semi_supervised_fit",
    "supervised_classify",
    "supervised_fit",
    "supervised_predict",
    "to_json",
    "unsupervised_fit",
    "unsupervised_predict",
]
