"""Shared builders for tests."""

import numpy as np

from lfg.agents import AgentContext, FeatureStats, FeedbackEntry
from lfg.data import Dataset
from lfg.evaluation import EvalReport
from lfg.expr import FeatureSubset, from_dataset
from lfg.ops import ALL_NAMES


def make_dataset(columns, matrix, labels, n_classes=None, **kw) -> Dataset:
    labels = np.asarray(labels, dtype=np.int64)
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    return Dataset(
        columns=tuple(columns),
        matrix=np.asarray(matrix, dtype=np.float64),
        labels=labels,
        n_classes=n_classes,
        **kw,
    )


def make_report(accuracy=0.5, precision=0.5, recall=0.5, f1=0.5, n_classes=2, **kw):
    return EvalReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        per_class_precision=(precision,) * n_classes,
        per_class_recall=(recall,) * n_classes,
        **kw,
    )


def make_context(
    dataset: Dataset,
    subset: FeatureSubset | None = None,
    agent_id="agent-1",
    feedback=(),
    peers=(),
    operations=ALL_NAMES,
    k_max=3,
    drops_enabled=True,
    rows=None,
) -> AgentContext:
    """Context over a dataset's raw columns (or a given subset), with stats
    computed from all rows unless a row selection is passed."""
    from lfg.expr import evaluate

    subset = subset or from_dataset(dataset)
    cols = [evaluate(e, dataset) for e in subset]
    X = np.column_stack(cols)
    if rows is not None:
        X = X[rows]
    stats = FeatureStats.from_matrix(subset.names, X)
    return AgentContext(
        agent_id=agent_id,
        subset=subset,
        feedback=tuple(feedback),
        peer_rationales=tuple(peers),
        operations=tuple(operations),
        k_max=k_max,
        stats=stats,
        drops_enabled=drops_enabled,
    )


def feedback_entry(iteration=1, delta=0.0, added=(), accuracy=0.5, notes=()):
    return FeedbackEntry(
        iteration=iteration,
        report=make_report(accuracy=accuracy),
        delta=delta,
        added=tuple(added),
        notes=tuple(notes),
    )
