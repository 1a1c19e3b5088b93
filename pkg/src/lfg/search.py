"""Layered feature-generation search with UCB-guided refinement.

The generation phase grows one node per agent per layer; each node's
subset is the parent subset plus accepted new features (minus explicit
drops).  A node's value is the running mean of its children's metric
deltas; leaves carry their own delta.  The refinement phase repeatedly
selects the highest-UCB nodes and expands them with operations their
lineage has not used yet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import data, expr
from .agents.proposals import (
    AgentContext,
    AgentProposal,
    Drop,
    FeatureStats,
    FeedbackEntry,
    Generate,
)
from .data import Dataset
from .errors import (
    AgentUnavailable,
    AllAgentsEmpty,
    DomainViolation,
    NothingToSelect,
    RootHasNoUcb,
)
from .evaluation import EvalReport, Materialized, ModelSpec, evaluate_subset, materialize
from .expr import Base, Binary, FeatureSubset, Unary
from .ops import ALL_NAMES, lookup

DEFAULT_C = 1.4142
DEFAULT_MAX_DEPTH = 4


@dataclass
class GenerationNode:
    id: int
    parent: int | None
    layer: int
    subset: FeatureSubset
    report: EvalReport
    delta: float
    agent_id: str | None = None
    actions: tuple = ()
    added: tuple[str, ...] = ()
    rationale: str = ""
    rejected: tuple[str, ...] = ()
    visits: int = 1
    value: float = 0.0
    children: list[int] = field(default_factory=list)

    def theta(self, metric: str) -> float:
        return self.report.metric(metric)


class SearchTree:
    """Nodes indexed by id; layer lists; value/visit bookkeeping."""

    def __init__(self, C: float = DEFAULT_C, T: int = 10, metric: str = "accuracy"):
        self.C = C
        self.T = T
        self.metric = metric
        self.nodes: list[GenerationNode] = []
        self.layers: dict[int, list[int]] = {}

    @property
    def root(self) -> GenerationNode:
        return self.nodes[0]

    def add_node(
        self,
        parent: int | None,
        layer: int,
        subset: FeatureSubset,
        report: EvalReport,
        delta: float,
        agent_id=None,
        actions=(),
        added=(),
        rationale="",
        rejected=(),
    ) -> int:
        node_id = len(self.nodes)
        node = GenerationNode(
            id=node_id,
            parent=parent,
            layer=layer,
            subset=subset,
            report=report,
            delta=delta,
            agent_id=agent_id,
            actions=tuple(actions),
            added=tuple(added),
            rationale=rationale,
            rejected=tuple(rejected),
            value=delta,
        )
        self.nodes.append(node)
        self.layers.setdefault(layer, []).append(node_id)
        if parent is not None:
            parent_node = self.nodes[parent]
            parent_node.children.append(node_id)
            self._refresh_value(parent_node)
            self.root.visits += 1  # root tallies every evaluation
        return node_id

    def _refresh_value(self, node: GenerationNode):
        deltas = [self.nodes[c].delta for c in node.children]
        node.value = sum(deltas) / len(deltas) if deltas else node.delta

    def node_value(self, node_id: int) -> float:
        return self.nodes[node_id].value

    def ucb(self, node_id: int) -> float:
        node = self.nodes[node_id]
        if node.parent is None:
            raise RootHasNoUcb("the root is not a selectable node")
        parent_visits = self.nodes[node.parent].visits
        return node.value + self.C * math.sqrt(2.0 * math.log(parent_visits) / node.visits)

    def path(self, node_id: int) -> list[int]:
        out = []
        cursor: int | None = node_id
        while cursor is not None:
            out.append(cursor)
            cursor = self.nodes[cursor].parent
        return list(reversed(out))

    def ops_on_path(self, node_id: int) -> set[str]:
        used = set()
        for nid in self.path(node_id):
            for action in self.nodes[nid].actions:
                if isinstance(action, Generate):
                    used.add(action.op)
        return used

    def select(self, m: int) -> list[int]:
        candidates = [
            n.id for n in self.nodes if n.parent is not None and n.layer < self.T
        ]
        if not candidates:
            raise NothingToSelect("no expandable node below the iteration cap")
        ranked = sorted(
            candidates,
            key=lambda nid: (-self.ucb(nid), -self.nodes[nid].theta(self.metric), nid),
        )
        chosen = ranked[: max(0, m)]
        for nid in chosen:
            for on_path in self.path(nid):
                self.nodes[on_path].visits += 1
        return chosen

    def leaf_argmax_value(self) -> int:
        leaves = [n for n in self.nodes if not n.children and n.parent is not None]
        if not leaves:
            return self.root.id
        best = max(leaves, key=lambda n: (n.value, -n.id))
        return best.id


def ucb(tree: SearchTree, node_id: int) -> float:
    return tree.ucb(node_id)


def select_nodes(tree: SearchTree, m: int) -> list[int]:
    return tree.select(m)


class Evaluator:
    """Shared evaluation context: dataset, split, model, column cache."""

    def __init__(self, dataset: Dataset, split, model_spec: ModelSpec, metric="accuracy"):
        self.dataset = dataset
        self.split = split
        self.model_spec = model_spec
        self.metric = metric
        self.cache: dict = {}

    def report(self, subset: FeatureSubset) -> EvalReport:
        return evaluate_subset(subset, self.dataset, self.split, self.model_spec, self.cache)

    def _materialized(self, subset: FeatureSubset) -> Materialized:
        return materialize(subset, self.dataset, self.split, self.cache)

    def stats(self, subset: FeatureSubset) -> FeatureStats:
        mat = self._materialized(subset)
        return FeatureStats.from_matrix(mat.kept, mat.train_X)

    def check_expr(self, e: expr.FeatureExpr):
        """Raises DomainViolation when the expression cannot be evaluated."""
        expr.evaluate(e, self.dataset, self.cache)


def _resolve_generate(action: Generate, subset: FeatureSubset):
    op = lookup(action.op)
    operands = [subset.get(name) for name in action.operands]
    if op.arity == 1:
        return Unary(op.name, operands[0])
    return Binary(op.name, operands[0], operands[1])


def apply_proposal(
    subset: FeatureSubset,
    proposal: AgentProposal,
    evaluator: Evaluator,
    max_depth: int = DEFAULT_MAX_DEPTH,
    drops_enabled: bool = True,
):
    """Apply a validated proposal to a subset.

    Returns (new_subset, applied_actions, added_names, rejected_notes).
    Generated features are checked for depth, duplication and numeric
    domain before entering the subset; failures are rejected with a note
    instead of failing the node.
    """
    applied: list = []
    added: list[expr.FeatureExpr] = []
    added_names: list[str] = []
    dropped: list[str] = []
    rejected: list[str] = []
    working = set(subset.names)

    for action in proposal.actions:
        if isinstance(action, Drop):
            if not drops_enabled:
                rejected.append(f"DROP {action.name}: drops are disabled")
                continue
            target = subset.get(action.name)
            if isinstance(target, Base):
                rejected.append(f"DROP {action.name}: original columns are kept")
                continue
            dropped.append(action.name)
            applied.append(action)
            continue
        try:
            candidate = _resolve_generate(action, subset)
        except KeyError as err:
            rejected.append(f"GEN {action.op}: unknown operand {err}")
            continue
        name = candidate.canonical_name
        if name in working:
            rejected.append(f"GEN {name}: duplicate of an existing feature")
            continue
        if candidate.depth > max_depth:
            rejected.append(f"GEN {name}: depth {candidate.depth} exceeds cap {max_depth}")
            continue
        try:
            evaluator.check_expr(candidate)
        except DomainViolation as err:
            rejected.append(f"GEN {name}: {err}")
            continue
        working.add(name)
        added.append(candidate)
        added_names.append(name)
        applied.append(action)

    new_subset = subset.with_changes(add=added, drop=dropped)
    return new_subset, tuple(applied), tuple(added_names), tuple(rejected)


def _feedback_chain(tree: SearchTree, node_id: int) -> tuple[FeedbackEntry, ...]:
    entries = []
    for nid in tree.path(node_id):
        node = tree.nodes[nid]
        if node.parent is None:
            continue  # the raw baseline is not an iteration
        entries.append(
            FeedbackEntry(
                iteration=node.layer,
                report=node.report,
                delta=node.delta,
                added=node.added,
                notes=node.rejected,
            )
        )
    return tuple(entries)


def build_context(
    tree: SearchTree,
    parent_id: int,
    agent_id: str,
    evaluator: Evaluator,
    k_max: int,
    operations=ALL_NAMES,
    drops_enabled: bool = True,
    peers=(),
    visible_bases=None,
) -> AgentContext:
    parent = tree.nodes[parent_id]
    subset = parent.subset
    if visible_bases is not None:
        # partitioned mode: the agent works on its slice of the original
        # columns (generated features stay visible); the node itself keeps
        # the full set, so subset growth semantics are unchanged
        kept = tuple(
            e
            for e in subset
            if not isinstance(e, Base) or e.canonical_name in visible_bases
        )
        subset = FeatureSubset(kept, origin=subset.origin)
    return AgentContext(
        agent_id=agent_id,
        subset=subset,
        feedback=_feedback_chain(tree, parent_id),
        peer_rationales=tuple(peers),
        operations=tuple(operations),
        k_max=k_max,
        stats=evaluator.stats(subset),
        drops_enabled=drops_enabled,
    )


def partition_base_columns(dataset: Dataset, agents) -> dict:
    """Round-robin assignment of original columns to agents by index."""
    out = {agent.agent_id: set() for agent in agents}
    for i, column in enumerate(dataset.columns):
        out[agents[i % len(agents)].agent_id].add(column)
    return out


def init_root(dataset: Dataset, evaluator: Evaluator, C=DEFAULT_C, T=10) -> SearchTree:
    """Evaluate the raw feature set as the root node."""
    tree = SearchTree(C=C, T=T, metric=evaluator.metric)
    subset = expr.from_dataset(dataset)
    report = evaluator.report(subset)
    tree.add_node(parent=None, layer=0, subset=subset, report=report, delta=0.0)
    return tree


def _agent_tip(tree: SearchTree, agent_id: str) -> int:
    tips = [n.id for n in tree.nodes if n.agent_id == agent_id]
    return tips[-1] if tips else tree.root.id


def run_layer(
    tree: SearchTree,
    agents,
    evaluator: Evaluator,
    t: int,
    k_max: int = 3,
    max_depth: int = DEFAULT_MAX_DEPTH,
    drops_enabled: bool = True,
    operations=ALL_NAMES,
    partitions=None,
) -> list[int]:
    """One generation iteration: each agent extends its own previous node."""
    previous_layer = tree.layers.get(t - 1, [])
    peer_pool = [
        (tree.nodes[nid].agent_id, tree.nodes[nid].rationale) for nid in previous_layer
    ]
    new_ids = []
    for agent in agents:
        parent_id = _agent_tip(tree, agent.agent_id)
        peers = [(a, r) for a, r in peer_pool if a != agent.agent_id and r]
        visible = partitions.get(agent.agent_id) if partitions else None
        ctx = build_context(
            tree, parent_id, agent.agent_id, evaluator, k_max, operations, drops_enabled,
            peers, visible
        )
        try:
            proposal = agent.propose(ctx)
        except AgentUnavailable as err:
            proposal = AgentProposal.empty(rationale=f"unavailable: {err}")
        new_id = _apply_and_attach(
            tree, parent_id, t, agent, proposal, evaluator, max_depth, drops_enabled
        )
        if new_id is not None:
            new_ids.append(new_id)
    if not new_ids:
        raise AllAgentsEmpty(f"layer {t}: every agent returned an empty or no-op proposal")
    return new_ids


def _apply_and_attach(
    tree, parent_id, layer, agent, proposal, evaluator, max_depth, drops_enabled
) -> int | None:
    parent = tree.nodes[parent_id]
    new_subset, applied, added, rejected = apply_proposal(
        parent.subset, proposal, evaluator, max_depth, drops_enabled
    )
    if new_subset.names == parent.subset.names:
        return None
    report = evaluator.report(new_subset)
    delta = report.metric(tree.metric) - parent.report.metric(tree.metric)
    return tree.add_node(
        parent=parent_id,
        layer=layer,
        subset=new_subset,
        report=report,
        delta=delta,
        agent_id=agent.agent_id,
        actions=applied,
        added=added,
        rationale=proposal.rationale,
        rejected=rejected,
    )


def expand(
    tree: SearchTree,
    node_id: int,
    agents,
    evaluator: Evaluator,
    k_max: int = 3,
    max_depth: int = DEFAULT_MAX_DEPTH,
    drops_enabled: bool = True,
) -> list[int]:
    """Expand a selected node with operations new to its lineage."""
    used = tree.ops_on_path(node_id)
    novel = tuple(name for name in ALL_NAMES if name not in used)
    operations = novel if novel else ALL_NAMES
    node = tree.nodes[node_id]
    new_ids = []
    for agent in agents:
        ctx = build_context(
            tree, node_id, agent.agent_id, evaluator, k_max, operations, drops_enabled, ()
        )
        try:
            proposal = agent.propose(ctx)
        except AgentUnavailable as err:
            proposal = AgentProposal.empty(rationale=f"unavailable: {err}")
        new_id = _apply_and_attach(
            tree, node_id, node.layer + 1, agent, proposal, evaluator, max_depth, drops_enabled
        )
        if new_id is not None:
            new_ids.append(new_id)
    return new_ids


@dataclass(frozen=True, eq=False)
class RunResult:
    best_subset: FeatureSubset
    best_report: EvalReport
    best_node: int
    baseline_report: EvalReport
    improvement: float
    per_layer_best: tuple[tuple[int, int, float], ...]  # (layer, node id, theta)
    mcts_choice: int
    stop_reason: str
    tree: SearchTree


def best_subset(tree: SearchTree, stop_reason: str = "") -> RunResult:
    """Best-by-theta over the per-layer optima plus the root, and the
    highest-value leaf as the refinement phase's own pick."""
    metric = tree.metric
    per_layer = []
    for layer in sorted(tree.layers):
        if layer == 0:
            continue
        ids = tree.layers[layer]
        best_id = max(ids, key=lambda nid: (tree.nodes[nid].theta(metric), -nid))
        per_layer.append((layer, best_id, tree.nodes[best_id].theta(metric)))

    candidates = [tree.root.id] + [nid for _, nid, _ in per_layer]
    winner = max(candidates, key=lambda nid: (tree.nodes[nid].theta(metric), -nid))
    best = tree.nodes[winner]
    baseline = tree.root.report
    return RunResult(
        best_subset=best.subset,
        best_report=best.report,
        best_node=winner,
        baseline_report=baseline,
        improvement=best.theta(metric) - tree.root.theta(metric),
        per_layer_best=tuple(per_layer),
        mcts_choice=tree.leaf_argmax_value(),
        stop_reason=stop_reason,
        tree=tree,
    )


def run(config, dataset: Dataset, agents=None) -> RunResult:
    """Full pipeline: root evaluation, T generation layers (with early
    stopping), then the UCB refinement rounds, then best-subset selection."""
    from .config import build_agents  # deferred: config imports this module

    split = data.split(dataset, config.train_fraction, config.seed)
    evaluator = Evaluator(dataset, split, config.model_spec(), config.metric)
    if agents is None:
        agents = build_agents(config)
    tree = init_root(dataset, evaluator, C=config.exploration_c, T=config.iterations)
    partitions = (
        partition_base_columns(dataset, agents) if config.partition_base_columns else None
    )

    best_theta = tree.root.theta(config.metric)
    flat_layers = 0
    stop_reason = "iteration cap"
    for t in range(1, config.iterations + 1):
        try:
            new_ids = run_layer(
                tree,
                agents,
                evaluator,
                t,
                k_max=config.k_max,
                max_depth=config.max_depth,
                drops_enabled=config.drops_enabled,
                partitions=partitions,
            )
        except AllAgentsEmpty:
            stop_reason = f"empty layer at t={t}"
            break
        layer_best = max(tree.nodes[nid].theta(config.metric) for nid in new_ids)
        if layer_best > best_theta:
            best_theta = layer_best
            flat_layers = 0
        else:
            flat_layers += 1
            if flat_layers >= config.patience:
                stop_reason = f"patience ({config.patience} flat layers)"
                break

    for _ in range(config.mcts_rounds):
        try:
            selected = tree.select(config.mcts_select)
        except NothingToSelect:
            break
        for node_id in selected:
            expand(
                tree,
                node_id,
                agents,
                evaluator,
                k_max=config.k_max,
                max_depth=config.max_depth,
                drops_enabled=config.drops_enabled,
            )

    return best_subset(tree, stop_reason=stop_reason)
