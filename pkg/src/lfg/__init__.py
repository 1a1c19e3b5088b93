"""Explainable feature generation for tabular classification.

Agents propose mathematical transformations of existing columns, a search
tree scores every proposal on a downstream classifier, and UCB-guided
refinement expands the most promising nodes.  Every generated feature has
a canonical name and a resolvable lineage.
"""

from . import agents, data, evaluation, expr, kernels, ops, search
from .config import RunConfig, load_config
from .data import Dataset, FoldSpec, SplitSpec, kfold, load_csv, split, standardize
from .errors import LfgError
from .evaluation import EvalReport, ModelSpec, evaluate_subset, metrics
from .expr import FeatureSubset, canonical_name, dedupe, evaluate, lineage, parse_name
from .search import RunResult, SearchTree, run

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EvalReport",
    "FeatureSubset",
    "FoldSpec",
    "LfgError",
    "ModelSpec",
    "RunConfig",
    "RunResult",
    "SearchTree",
    "SplitSpec",
    "agents",
    "canonical_name",
    "data",
    "dedupe",
    "evaluate",
    "evaluate_subset",
    "evaluation",
    "expr",
    "kernels",
    "kfold",
    "lineage",
    "load_config",
    "load_csv",
    "metrics",
    "ops",
    "parse_name",
    "run",
    "search",
    "split",
    "standardize",
]
