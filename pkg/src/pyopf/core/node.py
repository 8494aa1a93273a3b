"""Per-sample view of a subgraph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pyopf.core.heap import NIL


@dataclass
class Node:
    """One sample together with its optimum-path state.

    Subgraphs store node state column-wise; ``Subgraph.node(i)`` builds one of
    these as a snapshot and ``Subgraph.from_nodes`` goes the other way.
    """

    idx: int
    features: np.ndarray
    true_label: int = 0
    predicted_label: int = 0
    cost: float = 0.0
    density: float = 0.0
    predecessor: int = NIL
    root: int = NIL
    is_prototype: bool = False
    is_relevant: bool = False
    cluster_label: int = 0

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.root == NIL:
            self.root = self.idx
