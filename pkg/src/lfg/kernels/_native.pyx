# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fast path for the evaluation kernels.

Must stay value-for-value equivalent with kernels/pure.py, including the
tie-breaking rules; the parity test suite compares both backends.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def knn_predict(train_in, labels_in, test_in, int k, int n_classes):
    cdef double[:, ::1] train = np.ascontiguousarray(train_in, dtype=np.float64)
    cdef double[:, ::1] test = np.ascontiguousarray(test_in, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = np.ascontiguousarray(labels_in, dtype=np.int64)
    cdef Py_ssize_t ntr = train.shape[0]
    cdef Py_ssize_t nte = test.shape[0]
    cdef Py_ssize_t d = train.shape[1]
    cdef int kk = k if k < ntr else <int>ntr

    preds_arr = np.empty(nte, dtype=np.int64)
    cdef cnp.int64_t[::1] preds = preds_arr
    best_d_arr = np.empty(kk, dtype=np.float64)
    best_i_arr = np.empty(kk, dtype=np.int64)
    counts_arr = np.empty(n_classes, dtype=np.int64)
    cdef double[::1] best_d = best_d_arr
    cdef cnp.int64_t[::1] best_i = best_i_arr
    cdef cnp.int64_t[::1] counts = counts_arr

    cdef Py_ssize_t i, j, f, m, pos
    cdef int filled
    cdef double dist, diff, bc
    cdef cnp.int64_t cls, best_cls

    for i in range(nte):
        filled = 0
        for j in range(ntr):
            dist = 0.0
            for f in range(d):
                diff = test[i, f] - train[j, f]
                dist += diff * diff
            if filled < kk:
                # insert into the sorted prefix; equal distances keep the
                # earlier (lower) train index in front
                pos = filled
                while pos > 0 and best_d[pos - 1] > dist:
                    best_d[pos] = best_d[pos - 1]
                    best_i[pos] = best_i[pos - 1]
                    pos -= 1
                best_d[pos] = dist
                best_i[pos] = j
                filled += 1
            elif dist < best_d[kk - 1]:
                pos = kk - 1
                while pos > 0 and best_d[pos - 1] > dist:
                    best_d[pos] = best_d[pos - 1]
                    best_i[pos] = best_i[pos - 1]
                    pos -= 1
                best_d[pos] = dist
                best_i[pos] = j
        for m in range(n_classes):
            counts[m] = 0
        for m in range(kk):
            counts[labels[best_i[m]]] += 1
        best_cls = 0
        for m in range(1, n_classes):
            if counts[m] > counts[best_cls]:
                best_cls = m
        preds[i] = best_cls
    return preds_arr


def best_gini_split(X_in, y_in, int n_classes, int min_leaf):
    cdef double[:, ::1] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef cnp.int64_t[::1] y = np.ascontiguousarray(y_in, dtype=np.int64)
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]

    cdef int best_feature = -1
    cdef double best_threshold = 0.0
    cdef double best_score = np.inf

    if n < 2 * min_leaf:
        return best_feature, best_threshold, best_score

    left_arr = np.empty(n_classes, dtype=np.int64)
    right_arr = np.empty(n_classes, dtype=np.int64)
    xs_arr = np.empty(n, dtype=np.float64)
    ys_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] left = left_arr
    cdef cnp.int64_t[::1] right = right_arr
    cdef double[::1] xs = xs_arr
    cdef cnp.int64_t[::1] ys = ys_arr
    cdef cnp.int64_t[::1] order

    cdef Py_ssize_t f, i, c
    cdef cnp.int64_t nl, nr, ssl, ssr
    cdef double gl, gr, score
    cdef cnp.int64_t cls

    col_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] col = col_arr

    for f in range(d):
        for i in range(n):
            col[i] = X[i, f]
        order = np.argsort(col_arr, kind="stable")
        for i in range(n):
            xs[i] = col[order[i]]
            ys[i] = y[order[i]]
        for c in range(n_classes):
            left[c] = 0
            right[c] = 0
        for i in range(n):
            right[ys[i]] += 1
        ssr = 0
        for c in range(n_classes):
            ssr += right[c] * right[c]
        ssl = 0
        nl = 0
        for i in range(n - 1):
            cls = ys[i]
            ssl += 2 * left[cls] + 1
            left[cls] += 1
            ssr += -2 * right[cls] + 1
            right[cls] -= 1
            nl += 1
            nr = n - nl
            if xs[i] >= xs[i + 1] or nl < min_leaf or nr < min_leaf:
                continue
            gl = 1.0 - <double>ssl / <double>(nl * nl)
            gr = 1.0 - <double>ssr / <double>(nr * nr)
            score = (<double>nl * gl + <double>nr * gr) / <double>n
            if score < best_score:
                best_feature = <int>f
                best_threshold = (xs[i] + xs[i + 1]) / 2.0
                best_score = score
    return best_feature, best_threshold, best_score
