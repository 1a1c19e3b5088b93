"""Downstream classifiers built on the kernel backends.

Both models are fully deterministic: every tie-breaking rule is fixed
(documented on the kernel functions) so identical inputs give identical
predictions across runs and backends.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import DegenerateTraining


def _check_train(y: np.ndarray):
    if np.unique(y).size < 2:
        raise DegenerateTraining("training labels contain a single class")


class KNearestNeighbors:
    """k-NN with euclidean distance on train-standardized columns.

    Standardization statistics come from the training rows only; constant
    train columns map to zeros on both sides.
    """

    def __init__(self, k: int = 5):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self._train = None
        self._labels = None
        self._mean = None
        self._scale = None
        self.n_classes = None

    def fit(self, X, y, n_classes: int):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        _check_train(y)
        self._mean = X.mean(axis=0)
        sd = X.std(axis=0)
        self._scale = np.where(sd == 0.0, 0.0, 1.0 / np.where(sd == 0.0, 1.0, sd))
        self._train = (X - self._mean) * self._scale
        self._labels = y
        self.n_classes = n_classes
        return self

    def predict(self, X) -> np.ndarray:
        X = (np.asarray(X, dtype=np.float64) - self._mean) * self._scale
        return kernels.knn_predict(self._train, self._labels, X, self.k, self.n_classes)


class DecisionTree:
    """Greedy gini tree with max-depth and min-samples-per-leaf stopping."""

    def __init__(self, max_depth: int = 8, min_samples_leaf: int = 5):
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        # parallel arrays: internal nodes have feature >= 0, leaves are -1
        self._feature: list[int] = []
        self._threshold: list[float] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._pred: list[int] = []
        self.n_classes = None

    def fit(self, X, y, n_classes: int):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        _check_train(y)
        self.n_classes = n_classes
        self._feature, self._threshold = [], []
        self._left, self._right, self._pred = [], [], []
        self._build(X, y, np.arange(X.shape[0]), depth=0)
        return self

    def _new_node(self) -> int:
        self._feature.append(-1)
        self._threshold.append(0.0)
        self._left.append(-1)
        self._right.append(-1)
        self._pred.append(-1)
        return len(self._feature) - 1

    def _build(self, X, y, rows, depth) -> int:
        node = self._new_node()
        counts = np.bincount(y[rows], minlength=self.n_classes)
        self._pred[node] = int(counts.argmax())  # vote ties: smaller class id
        if (
            depth >= self.max_depth
            or counts.max() == rows.size
            or rows.size < 2 * self.min_samples_leaf
        ):
            return node
        f, thr, score = kernels.best_gini_split(
            X[rows], y[rows], self.n_classes, self.min_samples_leaf
        )
        if f < 0:
            return node
        mask = X[rows, f] <= thr
        self._feature[node] = int(f)
        self._threshold[node] = float(thr)
        self._left[node] = self._build(X, y, rows[mask], depth + 1)
        self._right[node] = self._build(X, y, rows[~mask], depth + 1)
        return node

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        for i in range(X.shape[0]):
            node = 0
            while self._feature[node] >= 0:
                if X[i, self._feature[node]] <= self._threshold[node]:
                    node = self._left[node]
                else:
                    node = self._right[node]
            out[i] = self._pred[node]
        return out
