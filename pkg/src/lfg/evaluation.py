"""Materialize feature subsets and score them on a downstream classifier."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr
from .data import Dataset, FoldSpec, SplitSpec
from .errors import (
    DomainViolation,
    EmptyFeatureMatrix,
    LengthMismatch,
)
from .expr import FeatureSubset
from .models import DecisionTree, KNearestNeighbors

MODEL_KINDS = ("knn", "decision_tree")


@dataclass(frozen=True)
class ModelSpec:
    kind: str = "knn"
    knn_k: int = 5
    tree_max_depth: int = 8
    tree_min_leaf: int = 5

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.knn_k < 1 or self.tree_max_depth < 1 or self.tree_min_leaf < 1:
            raise ValueError("model hyperparameters must be >= 1")

    def build(self):
        if self.kind == "knn":
            return KNearestNeighbors(k=self.knn_k)
        return DecisionTree(max_depth=self.tree_max_depth, min_samples_leaf=self.tree_min_leaf)

    def tag(self) -> str:
        if self.kind == "knn":
            return f"knn(k={self.knn_k})"
        return f"decision_tree(depth={self.tree_max_depth},min_leaf={self.tree_min_leaf})"


@dataclass(frozen=True)
class EvalReport:
    """Downstream metrics for one feature subset on one task."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    per_class_precision: tuple[float, ...]
    per_class_recall: tuple[float, ...]
    model: str = ""
    split: str = ""
    folds: tuple["EvalReport", ...] = ()

    def metric(self, name: str) -> float:
        try:
            return {
                "accuracy": self.accuracy,
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
            }[name]
        except KeyError:
            raise ValueError(f"unknown metric {name!r}") from None

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def metrics(predictions, truth, n_classes: int, model: str = "", split: str = "") -> EvalReport:
    """Accuracy plus macro precision/recall/F1 from a confusion matrix.

    Per-class precision and recall use the 0-when-undefined convention so
    the report is total over all inputs.
    """
    predictions = np.asarray(predictions, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if predictions.shape != truth.shape:
        raise LengthMismatch(f"{predictions.shape} predictions vs {truth.shape} labels")
    n = truth.size
    accuracy = float((predictions == truth).sum() / n)
    prec, rec = [], []
    for c in range(n_classes):
        tp = int(((predictions == c) & (truth == c)).sum())
        fp = int(((predictions == c) & (truth != c)).sum())
        fn = int(((predictions != c) & (truth == c)).sum())
        prec.append(tp / (tp + fp) if tp + fp else 0.0)
        rec.append(tp / (tp + fn) if tp + fn else 0.0)
    macro_p = sum(prec) / n_classes
    macro_r = sum(rec) / n_classes
    f1 = 2.0 * macro_p * macro_r / (macro_p + macro_r) if macro_p > 0 and macro_r > 0 else 0.0
    return EvalReport(
        accuracy=accuracy,
        precision=macro_p,
        recall=macro_r,
        f1=f1,
        per_class_precision=tuple(prec),
        per_class_recall=tuple(rec),
        model=model,
        split=split,
    )


@dataclass(frozen=True)
class Materialized:
    train_X: np.ndarray
    test_X: np.ndarray
    train_y: np.ndarray
    test_y: np.ndarray
    kept: tuple[str, ...]
    dropped: tuple[tuple[str, str], ...] = field(default=())


def materialize(
    subset: FeatureSubset, d: Dataset, split: SplitSpec, cache: dict | None = None
) -> Materialized:
    """Evaluate a subset into train/test matrices (column order = subset order).

    Expressions whose evaluation violates a domain guard are excluded and
    reported in ``dropped``; the subset fails only if nothing survives.
    """
    cols, kept, dropped = [], [], []
    for e in subset:
        try:
            cols.append(expr.evaluate(e, d, cache))
            kept.append(e.canonical_name)
        except DomainViolation as err:
            dropped.append((e.canonical_name, str(err)))
    if not cols:
        raise EmptyFeatureMatrix(f"all {len(subset)} columns violated domain guards")
    X = np.column_stack(cols)
    tr, te = split.train_indices, split.test_indices
    return Materialized(
        train_X=X[tr],
        test_X=X[te],
        train_y=d.labels[tr],
        test_y=d.labels[te],
        kept=tuple(kept),
        dropped=tuple(dropped),
    )


def fit_predict(model: ModelSpec, train_X, train_y, test_X, n_classes: int) -> np.ndarray:
    return model.build().fit(train_X, train_y, n_classes).predict(test_X)


def _fold_split(folds: FoldSpec, j: int) -> SplitSpec:
    test = np.flatnonzero(folds.fold_assignments == j)
    train = np.flatnonzero(folds.fold_assignments != j)
    n = folds.fold_assignments.size
    return SplitSpec(train, test, seed=j, train_fraction=train.size / n)


def _mean_reports(reports: list[EvalReport], model: str, split: str) -> EvalReport:
    k = len(reports)
    n_classes = len(reports[0].per_class_precision)
    return EvalReport(
        accuracy=sum(r.accuracy for r in reports) / k,
        precision=sum(r.precision for r in reports) / k,
        recall=sum(r.recall for r in reports) / k,
        f1=sum(r.f1 for r in reports) / k,
        per_class_precision=tuple(
            sum(r.per_class_precision[c] for r in reports) / k for c in range(n_classes)
        ),
        per_class_recall=tuple(
            sum(r.per_class_recall[c] for r in reports) / k for c in range(n_classes)
        ),
        model=model,
        split=split,
        folds=tuple(reports),
    )


def evaluate_subset(
    subset: FeatureSubset,
    d: Dataset,
    split_or_folds,
    model: ModelSpec,
    cache: dict | None = None,
) -> EvalReport:
    """Score a subset on a single split, or mean-over-folds for a FoldSpec."""
    if isinstance(split_or_folds, SplitSpec):
        mat = materialize(subset, d, split_or_folds, cache)
        preds = fit_predict(model, mat.train_X, mat.train_y, mat.test_X, d.n_classes)
        return metrics(
            preds, mat.test_y, d.n_classes, model=model.tag(), split=split_or_folds.tag()
        )
    if isinstance(split_or_folds, FoldSpec):
        reports = []
        for j in range(split_or_folds.k):
            fold = _fold_split(split_or_folds, j)
            mat = materialize(subset, d, fold, cache)
            preds = fit_predict(model, mat.train_X, mat.train_y, mat.test_X, d.n_classes)
            reports.append(
                metrics(preds, mat.test_y, d.n_classes, model=model.tag(), split=f"fold{j}")
            )
        return _mean_reports(reports, model.tag(), split_or_folds.tag())
    raise TypeError(f"expected SplitSpec or FoldSpec, got {type(split_or_folds)!r}")
