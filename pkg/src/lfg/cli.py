"""Command-line front end: run a search, report on it, explain a feature.

Exit codes: 0 success, 2 configuration/user error, 3 runtime failure.
On error a machine-readable JSON object {"error": ..., "detail": ...} is
printed to stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import data, expr, runlog, search
from .config import load_config
from .errors import USER_ERRORS, IncompleteRun, LfgError, UnknownFeature
from .evaluation import materialize


def _make_run_dir(base, seed) -> Path:
    stamp = time.strftime("%Y%m%d-%H%M%S")
    root = Path(base)
    root.mkdir(parents=True, exist_ok=True)
    candidate = root / f"{stamp}-seed{seed}"
    suffix = 1
    while candidate.exists():
        candidate = root / f"{stamp}-seed{seed}-{suffix}"
        suffix += 1
    candidate.mkdir()
    return candidate


def _write_features_csv(path, result, dataset, split, cache):
    mat = materialize(result.best_subset, dataset, split, cache)
    order = np.concatenate([split.train_indices, split.test_indices])
    X = np.vstack([mat.train_X, mat.test_X])
    y = np.concatenate([mat.train_y, mat.test_y])
    tags = ["train"] * split.train_indices.size + ["test"] * split.test_indices.size
    rank = np.argsort(order, kind="stable")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", *mat.kept, "label", "split"])
        for i in rank:
            writer.writerow([int(order[i]), *[repr(float(v)) for v in X[i]], int(y[i]), tags[i]])


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.iterations is not None:
        config.iterations = args.iterations
    if args.agents is not None:
        config.agents = args.agents
    config.validate()

    dataset = data.load_csv(config.dataset, config.label_column, config.drop_missing)
    result = search.run(config, dataset)
    tree = result.tree

    run_dir = _make_run_dir(config.output_dir, config.seed)
    (run_dir / "config.txt").write_text(config.snapshot(), encoding="utf-8")
    runlog.write_log(run_dir / "nodes.jsonl", tree)

    split = data.split(dataset, config.train_fraction, config.seed)
    _write_features_csv(run_dir / "features.csv", result, dataset, split, {})

    summary = {
        "baseline": result.baseline_report.as_dict(),
        "best": result.best_report.as_dict(),
        "improvement": result.improvement,
        "metric": config.metric,
        "features": list(result.best_subset.names),
        "best_node": result.best_node,
        "mcts_choice": result.mcts_choice,
        "layers": int(max(tree.layers)) if tree.layers else 0,
        "stop_reason": result.stop_reason,
        "nodes": len(tree.nodes),
    }
    (run_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    theta = config.metric
    print(f"run directory: {run_dir}")
    print(
        f"{theta}: baseline {result.baseline_report.metric(theta):.4f} -> "
        f"best {result.best_report.metric(theta):.4f} "
        f"(improvement {result.improvement:+.4f}, node {result.best_node})"
    )
    print(f"best subset ({len(result.best_subset)} features): see summary.json")
    return 0


def _load_run(run_dir: Path):
    summary_path = run_dir / "summary.json"
    if not summary_path.exists():
        raise IncompleteRun(f"missing summary.json in {run_dir}")
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    header, records = runlog.read_log(run_dir / "nodes.jsonl")
    return summary, header, records


def cmd_report(args) -> int:
    run_dir = Path(args.run_dir)
    summary, header, records = _load_run(run_dir)
    by_layer: dict[int, list[dict]] = {}
    for record in records:
        by_layer.setdefault(record["layer"], []).append(record)

    metric = header["metric"]
    root = by_layer.get(0, [{}])[0]
    rows = [("raw", root["metrics"], len(root["features"]), "-")]
    for layer in sorted(l for l in by_layer if l > 0):
        nodes = by_layer[layer]
        best = max(nodes, key=lambda r: (r["metrics"][metric], -r["id"]))
        mean_count = sum(len(r["features"]) for r in nodes) / len(nodes)
        rows.append((f"iter {layer}", best["metrics"], mean_count, f"node {best['id']}"))
    rows.append(("best", summary["best"], len(summary["features"]), f"node {summary['best_node']}"))

    print(f"{'stage':<10} {'accuracy':>9} {'precision':>10} {'recall':>8} {'f1':>8} "
          f"{'features':>9}  source")
    for stage, m, count, source in rows:
        print(
            f"{stage:<10} {m['accuracy']:>9.4f} {m['precision']:>10.4f} "
            f"{m['recall']:>8.4f} {m['f1']:>8.4f} {count:>9.1f}  {source}"
        )
    print(f"stop reason: {summary['stop_reason']}; nodes evaluated: {summary['nodes']}")
    return 0


def cmd_explain(args) -> int:
    run_dir = Path(args.run_dir)
    summary, _, records = _load_run(run_dir)
    name = args.feature
    if name not in summary["features"]:
        raise UnknownFeature(f"{name!r} is not in the final subset")

    for line in expr.lineage(expr.parse_name(name)):
        print(line)

    producer = None
    for record in records:
        for action in record["actions"]:
            if action["kind"] == "generate" and action.get("result") == name:
                producer = record
                break
        if producer:
            break
    if producer is None:
        print("origin: original dataset column (no producing agent)")
    else:
        print(f"origin: node {producer['id']} (layer {producer['layer']}), "
              f"agent {producer['agent']}")
        print(f"rationale: {producer['rationale']}")
        print(f"metric delta at introduction: {producer['delta']:+.4f}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lfg", description="feature-generation search for tabular classification"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a search from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--iterations", type=int, default=None)
    p_run.add_argument("--agents", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_report = sub.add_parser("report", help="per-iteration metrics table for a run")
    p_report.add_argument("run_dir")
    p_report.set_defaults(func=cmd_report)

    p_explain = sub.add_parser("explain", help="lineage and provenance of one feature")
    p_explain.add_argument("run_dir")
    p_explain.add_argument("feature")
    p_explain.set_defaults(func=cmd_explain)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USER_ERRORS as err:
        print(json.dumps({"error": type(err).__name__, "detail": str(err)}))
        return 2
    except LfgError as err:
        print(json.dumps({"error": type(err).__name__, "detail": str(err)}))
        return 3


if __name__ == "__main__":
    sys.exit(main())
