"""Numpy reference implementations of the hot kernels.

These define the semantics (including every tie-breaking rule); the
compiled backend in _native.pyx must match them value-for-value.
"""

from __future__ import annotations

import numpy as np

# rows of the test matrix processed per block, bounds peak memory
_CHUNK = 128


def knn_predict(train, labels, test, k, n_classes):
    """Majority vote among the k nearest train rows (squared euclidean).

    Distance ties resolve to the lower train index, vote ties to the
    smaller class id.
    """
    train = np.ascontiguousarray(train, dtype=np.float64)
    test = np.ascontiguousarray(test, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    kk = min(k, train.shape[0])
    preds = np.empty(test.shape[0], dtype=np.int64)
    for start in range(0, test.shape[0], _CHUNK):
        block = test[start : start + _CHUNK]
        diff = block[:, None, :] - train[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        # stable sort keeps equal distances ordered by train index
        neighbors = np.argsort(d2, axis=1, kind="stable")[:, :kk]
        votes = labels[neighbors]
        counts = np.zeros((block.shape[0], n_classes), dtype=np.int64)
        np.add.at(counts, (np.arange(block.shape[0])[:, None], votes), 1)
        preds[start : start + _CHUNK] = counts.argmax(axis=1)
    return preds


def best_gini_split(X, y, n_classes, min_leaf):
    """Exhaustive scan for the split minimizing weighted child gini.

    Returns (feature, threshold, score); feature is -1 when no valid split
    exists.  Ties resolve to the lower feature index, then the lower
    threshold (features and sorted thresholds are scanned in order and only
    strict improvements are kept).
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    n, d = X.shape
    best_feature, best_threshold, best_score = -1, 0.0, np.inf
    if n < 2 * min_leaf:
        return best_feature, best_threshold, best_score
    for f in range(d):
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y[order]
        onehot = np.zeros((n, n_classes), dtype=np.int64)
        onehot[np.arange(n), ys] = 1
        left = np.cumsum(onehot, axis=0)[:-1]  # class counts left of boundary i
        total = left[-1] + onehot[-1]
        nl = np.arange(1, n, dtype=np.int64)
        nr = n - nl
        ssl = (left * left).sum(axis=1)
        right = total[None, :] - left
        ssr = (right * right).sum(axis=1)
        gl = 1.0 - ssl / (nl * nl)
        gr = 1.0 - ssr / (nr * nr)
        score = (nl * gl + nr * gr) / n
        valid = (xs[:-1] < xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
        if not valid.any():
            continue
        score = np.where(valid, score, np.inf)
        i = int(score.argmin())  # first minimum = lowest threshold
        if score[i] < best_score:
            best_feature = f
            best_threshold = (xs[i] + xs[i + 1]) / 2.0
            best_score = float(score[i])
    return best_feature, best_threshold, best_score
