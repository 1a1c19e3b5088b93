"""Immutable tabular datasets: CSV loading, stratified splits, k-folds."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDataset,
    KTooLarge,
    LabelColumnMissing,
    ParseError,
    StratificationImpossible,
    UnknownColumn,
)

MIN_ROWS = 10

# characters that would collide with the canonical expression grammar
_FORBIDDEN_NAME_CHARS = set("(),")

_uid_counter = itertools.count(1)


def _valid_name(name: str) -> bool:
    if not name:
        return False
    return not any(c.isspace() or c in _FORBIDDEN_NAME_CHARS for c in name)


@dataclass(frozen=True, eq=False)
class Dataset:
    """A fixed table of numeric feature columns plus integer class labels.

    Never mutated after construction; arrays are marked read-only so the
    instance can be shared freely across concurrent evaluations.
    """

    columns: tuple[str, ...]
    matrix: np.ndarray  # (n_samples, n_features) float64
    labels: np.ndarray  # (n_samples,) int64
    n_classes: int
    label_names: tuple[str, ...] = ()
    n_dropped_rows: int = 0
    source: str = ""
    uid: int = field(default_factory=lambda: next(_uid_counter))

    def __post_init__(self):
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if matrix.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if matrix.shape[0] != labels.shape[0]:
            raise ValueError("labels and matrix row counts differ")
        if matrix.shape[1] != len(self.columns):
            raise ValueError("column names and matrix width differ")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("duplicate column names")
        for name in self.columns:
            if not _valid_name(name):
                raise ValueError(f"invalid column name {name!r}")
        if not np.isfinite(matrix).all():
            raise ValueError("matrix contains NaN or infinite values")
        if self.n_classes < 2:
            raise DegenerateDataset(f"{self.n_classes} classes (need at least 2)")
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_classes):
            raise ValueError("labels outside [0, n_classes)")
        matrix.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]

    def index_of(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise UnknownColumn(name) from None

    def column(self, name: str) -> np.ndarray:
        return self.matrix[:, self.index_of(name)]


@dataclass(frozen=True, eq=False)
class SplitSpec:
    """One train/test partition of a dataset's rows."""

    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int
    train_fraction: float

    def __post_init__(self):
        train = np.ascontiguousarray(self.train_indices, dtype=np.int64)
        test = np.ascontiguousarray(self.test_indices, dtype=np.int64)
        overlap = np.intersect1d(train, test)
        if overlap.size:
            raise ValueError("train and test indices overlap")
        train.setflags(write=False)
        test.setflags(write=False)
        object.__setattr__(self, "train_indices", train)
        object.__setattr__(self, "test_indices", test)

    @property
    def n_rows(self) -> int:
        return self.train_indices.size + self.test_indices.size

    def tag(self) -> str:
        return f"split{self.train_fraction:g}/seed{self.seed}"


@dataclass(frozen=True, eq=False)
class FoldSpec:
    """Assignment of every row to one of k cross-validation folds."""

    k: int
    fold_assignments: np.ndarray

    def __post_init__(self):
        folds = np.ascontiguousarray(self.fold_assignments, dtype=np.int64)
        if folds.size and (folds.min() < 0 or folds.max() >= self.k):
            raise ValueError("fold id outside [0, k)")
        sizes = np.bincount(folds, minlength=self.k)
        if sizes.max() - sizes.min() > 1:
            raise ValueError("fold sizes differ by more than 1")
        folds.setflags(write=False)
        object.__setattr__(self, "fold_assignments", folds)

    def tag(self) -> str:
        return f"{self.k}fold"


def _resolve_label_column(header: list[str], label_column) -> int:
    if isinstance(label_column, str) and label_column in header:
        return header.index(label_column)
    idx = None
    if isinstance(label_column, int):
        idx = label_column
    elif isinstance(label_column, str):
        try:
            idx = int(label_column)
        except ValueError:
            idx = None
    if idx is not None and 0 <= idx < len(header):
        return idx
    raise LabelColumnMissing(f"label column {label_column!r} not found in header")


def load_csv(path, label_column, drop_missing: bool = False) -> Dataset:
    """Load an RFC-4180 CSV with a header row into a Dataset.

    Class labels are mapped to dense integer ids in order of first
    appearance.  Rows with any empty cell are dropped (and counted) when
    ``drop_missing`` is set; otherwise the first empty cell fails the load.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(0, "-", "file is empty (no header row)")
        header = [h.strip() for h in header]
        label_idx = _resolve_label_column(header, label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        seen = set()
        for name in feature_names:
            if not _valid_name(name):
                raise ParseError(
                    0, name, "column names must be nonempty, without whitespace or '(),'"
                )
            if name in seen:
                raise ParseError(0, name, "duplicate column name")
            seen.add(name)

        rows: list[list[float]] = []
        raw_labels: list[str] = []
        dropped = 0
        for row_no, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise ParseError(row_no, "-", f"expected {len(header)} cells, got {len(row)}")
            cells = [c.strip() for c in row]
            if any(c == "" for c in cells):
                if drop_missing:
                    dropped += 1
                    continue
                col = header[cells.index("")]
                raise ParseError(row_no, col, "empty cell (use drop_missing to skip such rows)")
            values = []
            for i, cell in enumerate(cells):
                if i == label_idx:
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(row_no, header[i], f"not a number: {cell!r}") from None
                if not math.isfinite(v):
                    raise ParseError(row_no, header[i], f"non-finite value: {cell!r}")
                values.append(v)
            rows.append(values)
            raw_labels.append(cells[label_idx])

    if len(rows) < MIN_ROWS:
        raise DegenerateDataset(f"{len(rows)} usable rows after cleaning (need >= {MIN_ROWS})")

    label_ids: dict[str, int] = {}
    labels = np.empty(len(raw_labels), dtype=np.int64)
    for i, raw in enumerate(raw_labels):
        if raw not in label_ids:
            label_ids[raw] = len(label_ids)
        labels[i] = label_ids[raw]
    if len(label_ids) < 2:
        raise DegenerateDataset("fewer than 2 distinct classes")

    return Dataset(
        columns=tuple(feature_names),
        matrix=np.asarray(rows, dtype=np.float64),
        labels=labels,
        n_classes=len(label_ids),
        label_names=tuple(label_ids),
        n_dropped_rows=dropped,
        source=str(path),
    )


def _class_members(labels: np.ndarray, n_classes: int) -> list[np.ndarray]:
    return [np.flatnonzero(labels == c) for c in range(n_classes)]


def split(d: Dataset, train_fraction: float, seed: int) -> SplitSpec:
    """Deterministic stratified train/test split.

    The total train size is round(train_fraction * n); per-class train
    counts follow largest-remainder apportionment so every class keeps its
    proportion within one row.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie in (0, 1)")
    n = d.n_samples
    members = _class_members(d.labels, d.n_classes)
    for c, m in enumerate(members):
        if m.size < 2:
            raise StratificationImpossible(f"class {c} has {m.size} member(s)")

    total_train = int(math.floor(train_fraction * n + 0.5))
    ideals = [train_fraction * m.size for m in members]
    counts = [int(math.floor(x)) for x in ideals]
    remainder = total_train - sum(counts)
    order = sorted(range(d.n_classes), key=lambda c: (-(ideals[c] - counts[c]), c))
    for c in order[:remainder]:
        counts[c] += 1

    rng = np.random.default_rng(seed)
    train_parts, test_parts = [], []
    for c, m in enumerate(members):
        perm = rng.permutation(m)
        train_parts.append(perm[: counts[c]])
        test_parts.append(perm[counts[c] :])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return SplitSpec(train, test, seed=seed, train_fraction=train_fraction)


def kfold(d: Dataset, k: int, seed: int) -> FoldSpec:
    """Deterministic stratified k-fold assignment; fold sizes differ by <= 1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > d.n_samples:
        raise KTooLarge(f"k={k} exceeds n_samples={d.n_samples}")
    rng = np.random.default_rng(seed)
    assignments = np.empty(d.n_samples, dtype=np.int64)
    pointer = 0
    for m in _class_members(d.labels, d.n_classes):
        for idx in rng.permutation(m):
            assignments[idx] = pointer % k
            pointer += 1
    return FoldSpec(k=k, fold_assignments=assignments)


def standardize(values) -> np.ndarray:
    """Shift/scale to mean 0, population std 1; constant input maps to zeros."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("standardize: empty input")
    sd = v.std()
    if sd == 0.0:
        return np.zeros_like(v)
    return (v - v.mean()) / sd
