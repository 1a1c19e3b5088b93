"""JSON-lines node log: one header record, then one record per node.

Serialization is canonical (sorted keys, fixed separators) so identical
runs produce byte-identical logs.
"""

from __future__ import annotations

import json

from .agents.proposals import Generate
from .errors import IncompleteRun
from .search import SearchTree

SCHEMA = "lfg-nodes/1"


def node_records(tree: SearchTree):
    yield {
        "schema": SCHEMA,
        "metric": tree.metric,
        "exploration_c": tree.C,
        "iteration_cap": tree.T,
        "split_strategy": "stratified",
        "nodes": len(tree.nodes),
    }
    for node in tree.nodes:
        added = list(node.added)
        actions = []
        for action in node.actions:
            if isinstance(action, Generate):
                actions.append(
                    {
                        "kind": "generate",
                        "op": action.op,
                        "operands": list(action.operands),
                        "result": added.pop(0) if added else None,
                    }
                )
            else:
                actions.append({"kind": "drop", "name": action.name})
        yield {
            "id": node.id,
            "parent": node.parent,
            "layer": node.layer,
            "agent": node.agent_id,
            "actions": actions,
            "features": list(node.subset.names),
            "metrics": node.report.as_dict(),
            "delta": node.delta,
            "w": node.value,
            "visits": node.visits,
            "rationale": node.rationale,
            "rejected": list(node.rejected),
        }


def dumps(tree: SearchTree) -> str:
    lines = [
        json.dumps(record, sort_keys=True, separators=(",", ":"))
        for record in node_records(tree)
    ]
    return "\n".join(lines) + "\n"


def write_log(path, tree: SearchTree):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(tree))


def read_log(path):
    """Returns (header, node records); raises IncompleteRun on damage."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [line for line in fh.read().splitlines() if line]
    except FileNotFoundError:
        raise IncompleteRun(f"missing node log: {path}") from None
    if not lines:
        raise IncompleteRun(f"empty node log: {path}")
    try:
        header = json.loads(lines[0])
        records = [json.loads(line) for line in lines[1:]]
    except json.JSONDecodeError as err:
        raise IncompleteRun(f"corrupt node log: {err}") from None
    if header.get("schema") != SCHEMA:
        raise IncompleteRun(f"unknown log schema: {header.get('schema')!r}")
    if len(records) != header.get("nodes"):
        raise IncompleteRun(
            f"log truncated: header says {header.get('nodes')} nodes, found {len(records)}"
        )
    return header, records
