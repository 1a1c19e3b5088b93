"""Backend parity: the compiled kernels must match the numpy reference
value-for-value, tie rules included."""

import numpy as np
import pytest

from lfg import kernels
from lfg.kernels import available_backends, pure

BACKENDS = available_backends()
needs_native = pytest.mark.skipif(
    "native" not in BACKENDS, reason="compiled extension not built"
)


def test_a_backend_is_selected():
    assert kernels.BACKEND in ("pure", "native")
    assert callable(kernels.knn_predict)


@needs_native
def test_native_is_selected_unless_forced_off():
    import os

    if os.environ.get("LFG_PURE_PYTHON") == "1":
        assert kernels.BACKEND == "pure"
    else:
        assert kernels.BACKEND == "native"


class TestKnnSemantics:
    def test_nearest_point(self):
        train = np.array([[0.0, 0.0], [10.0, 10.0]])
        labels = np.array([0, 1])
        preds = pure.knn_predict(train, labels, np.array([[1.0, 1.0]]), 1, 2)
        assert preds[0] == 0

    def test_vote_tie_smaller_class(self):
        train = np.array([[1.0], [-1.0]])
        labels = np.array([1, 0])  # both neighbors equidistant from 0
        preds = pure.knn_predict(train, labels, np.array([[0.0]]), 2, 2)
        assert preds[0] == 0

    def test_distance_tie_lower_train_index(self):
        # duplicate train points with different labels
        train = np.array([[1.0], [1.0], [5.0]])
        labels = np.array([1, 0, 0])
        preds = pure.knn_predict(train, labels, np.array([[1.0]]), 1, 2)
        assert preds[0] == 1  # index 0 wins the tie

    def test_k_larger_than_train_clamps(self):
        train = np.array([[0.0], [1.0], [2.0]])
        labels = np.array([0, 0, 1])
        preds = pure.knn_predict(train, labels, np.array([[0.0]]), 10, 2)
        assert preds[0] == 0


class TestSplitSemantics:
    def test_obvious_split(self):
        X = np.array([[1.0], [2.0], [3.0], [10.0], [11.0], [12.0]])
        y = np.array([0, 0, 0, 1, 1, 1])
        f, thr, score = pure.best_gini_split(X, y, 2, 1)
        assert f == 0
        assert thr == pytest.approx(6.5)
        assert score == pytest.approx(0.0)

    def test_min_leaf_respected(self):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0, 1, 1, 1])
        f, thr, score = pure.best_gini_split(X, y, 2, 2)
        # the only boundary keeping 2 per side is between rows 1 and 2
        assert f == 0
        assert thr == pytest.approx(2.5)

    def test_no_valid_split(self):
        X = np.ones((6, 2))
        y = np.array([0, 1, 0, 1, 0, 1])
        f, _, score = pure.best_gini_split(X, y, 2, 1)
        assert f == -1
        assert score == np.inf

    def test_tie_prefers_lower_feature_and_threshold(self):
        # two identical columns: the split must come from column 0
        col = np.array([1.0, 2.0, 3.0, 4.0])
        X = np.column_stack([col, col])
        y = np.array([0, 0, 1, 1])
        f, thr, _ = pure.best_gini_split(X, y, 2, 1)
        assert f == 0
        assert thr == pytest.approx(2.5)

    def test_brute_force_oracle(self, rng):
        """Compare against an O(n^2 d) enumeration of every (feature, boundary)."""
        for trial in range(25):
            n = int(rng.integers(6, 40))
            d = int(rng.integers(1, 4))
            n_classes = int(rng.integers(2, 4))
            X = rng.normal(size=(n, d)).round(1)  # rounding forces ties
            y = rng.integers(0, n_classes, n)
            min_leaf = int(rng.integers(1, 3))

            best = (np.inf, -1, 0.0)
            for f in range(d):
                values = np.unique(X[:, f])
                for lo, hi in zip(values[:-1], values[1:]):
                    thr = (lo + hi) / 2.0
                    left = y[X[:, f] <= thr]
                    right = y[X[:, f] > thr]
                    if len(left) < min_leaf or len(right) < min_leaf:
                        continue
                    gini = lambda part: 1.0 - sum(
                        (np.sum(part == c) / len(part)) ** 2 for c in range(n_classes)
                    )
                    score = (len(left) * gini(left) + len(right) * gini(right)) / n
                    if score < best[0] - 1e-12:
                        best = (score, f, thr)
            got_f, got_thr, got_score = pure.best_gini_split(X, y, n_classes, min_leaf)
            if best[1] == -1:
                assert got_f == -1
            else:
                assert got_score == pytest.approx(best[0], abs=1e-9)
                assert got_f == best[1]
                assert got_thr == pytest.approx(best[2])


@needs_native
class TestBackendParity:
    def test_knn_identical(self, rng):
        native = BACKENDS["native"]
        for trial in range(10):
            ntr = int(rng.integers(5, 120))
            nte = int(rng.integers(1, 300))  # crosses the chunking boundary
            d = int(rng.integers(1, 12))
            n_classes = int(rng.integers(2, 5))
            train = rng.normal(size=(ntr, d))
            test = rng.normal(size=(nte, d))
            labels = rng.integers(0, n_classes, ntr)
            k = int(rng.integers(1, 9))
            a = pure.knn_predict(train, labels, test, k, n_classes)
            b = native.knn_predict(train, labels, test, k, n_classes)
            assert np.array_equal(a, b)

    def test_knn_identical_with_duplicates(self, rng):
        native = BACKENDS["native"]
        train = rng.integers(0, 3, size=(40, 3)).astype(float)  # lots of exact ties
        test = rng.integers(0, 3, size=(25, 3)).astype(float)
        labels = rng.integers(0, 3, 40)
        for k in (1, 2, 5, 11):
            a = pure.knn_predict(train, labels, test, k, 3)
            b = native.knn_predict(train, labels, test, k, 3)
            assert np.array_equal(a, b)

    def test_split_identical(self, rng):
        native = BACKENDS["native"]
        for trial in range(25):
            n = int(rng.integers(4, 200))
            d = int(rng.integers(1, 8))
            n_classes = int(rng.integers(2, 5))
            X = rng.normal(size=(n, d))
            if trial % 2:
                X = X.round(1)
            y = rng.integers(0, n_classes, n)
            min_leaf = int(rng.integers(1, 4))
            a = pure.best_gini_split(X, y, n_classes, min_leaf)
            b = native.best_gini_split(X, y, n_classes, min_leaf)
            assert a[0] == b[0]
            assert a[1] == pytest.approx(b[1], abs=0.0)
            assert a[2] == pytest.approx(b[2], abs=0.0) or (
                np.isinf(a[2]) and np.isinf(b[2])
            )
