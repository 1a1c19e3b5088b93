"""Deterministic scripted proposal policies.

Three strategies mirror the default agent roster: nonlinear unary
transforms of high-variance features, binary interactions of strongly
paired features, and a balanced mix.  Every choice is a pure function of
(strategy, seed, context): candidates are ranked by sortable keys, ops are
chosen by fixed preference order, and a negative delta in the latest
feedback switches the policy to its secondary op family.  Features whose
addition did not strictly improve the metric are dropped again, and the
policy never re-proposes a feature it already tried on this search path.

Policies only ever touch operands of depth <= 2 and check the operation
guards against the feature statistics, so their proposals rarely bounce.
"""

from __future__ import annotations

from ..ops import EXP_MAX, lookup
from .proposals import (
    AgentContext,
    AgentProposal,
    Drop,
    Generate,
    validate_proposal,
)
from ..expr import Base, Binary, FeatureExpr, Unary

STRATEGIES = ("nonlinear-unary", "interaction-binary", "balanced")

# operand magnitudes a policy treats as a safe divisor
_DIV_MIN = 1e-6
# square/cube stay finite well below this bound
_POW_MAX = 1e100
_MAX_OPERAND_DEPTH = 2

_UNARY_PRIMARY = ("square", "sqrt", "log", "cube", "sigmoid")
_UNARY_SECONDARY = ("cos", "sin", "exp", "reciprocal")
# ratio exploration falls back to products when a divisor is unsafe, so the
# interaction policy keeps covering new pairs either way
_BINARY_PRIMARY = ("multiply", "divide")
_BINARY_SECONDARY = ("divide", "multiply")


def _sane_divisor(mn: float, mx: float) -> bool:
    return mn > _DIV_MIN or mx < -_DIV_MIN


def _unary_guard_ok(op: str, mn: float, mx: float) -> bool:
    if op == "sqrt":
        return mn >= 0.0
    if op == "log":
        return mn > 0.0
    if op == "exp":
        return mx <= EXP_MAX
    if op == "reciprocal":
        return _sane_divisor(mn, mx)
    if op == "tan":
        return False
    if op in ("square", "cube"):
        return max(abs(mn), abs(mx)) < _POW_MAX
    return True


class ScriptedAgent:
    kind = "scripted"

    def __init__(self, agent_id: str, strategy: str, seed: int = 0):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        self.agent_id = agent_id
        self.strategy = strategy
        self.seed = seed

    def __repr__(self):
        return f"ScriptedAgent({self.agent_id!r}, {self.strategy!r}, seed={self.seed})"

    # -- candidate pools -----------------------------------------------------

    def _operands(self, ctx: AgentContext) -> list[tuple[str, FeatureExpr]]:
        out = []
        for name in ctx.stats.names:
            if name not in ctx.subset:
                continue
            e = ctx.subset.get(name)
            if e.depth <= _MAX_OPERAND_DEPTH:
                out.append((name, e))
        return out

    def _unary_targets(self, ctx: AgentContext) -> list[str]:
        variances = {n: ctx.stats.stds[ctx.stats.index(n)] ** 2 for n, _ in self._operands(ctx)}
        return sorted(variances, key=lambda n: (-variances[n], n))

    def _pairs(self, ctx: AgentContext) -> list[tuple[str, str]]:
        names = [n for n, _ in self._operands(ctx)]
        keyed = []
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                first, second = sorted((a, b))
                depth_sum = ctx.subset.get(first).depth + ctx.subset.get(second).depth
                strength = ctx.stats.corr[ctx.stats.index(first), ctx.stats.index(second)]
                keyed.append(((depth_sum, -strength, first, second), (first, second)))
        return [pair for _, pair in sorted(keyed)]

    # -- move generators -----------------------------------------------------

    def _unary_moves(self, ctx, family, taken, offset, tried=frozenset()):
        family = [op for op in family if op in ctx.operations]
        if not family:
            family = [op for op in ctx.operations if _arity(op) == 1]
        for name in self._unary_targets(ctx):
            mn = ctx.stats.mins[ctx.stats.index(name)]
            mx = ctx.stats.maxs[ctx.stats.index(name)]
            child = ctx.subset.get(name)
            for j in range(len(family)):
                op = family[(offset + j) % len(family)]
                if not _unary_guard_ok(op, mn, mx):
                    continue
                candidate = Unary(op, child).canonical_name
                if candidate in ctx.subset or candidate in taken or candidate in tried:
                    continue
                taken.add(candidate)
                yield Generate(op, (name,)), candidate
                break

    def _binary_moves(self, ctx, family, taken, tried=frozenset()):
        family = [op for op in family if op in ctx.operations]
        if not family:
            family = [op for op in ctx.operations if _arity(op) == 2]
        for a, b in self._pairs(ctx):
            sa = ctx.stats.index(a)
            sb = ctx.stats.index(b)
            for op in family:
                operands = (a, b)
                if op == "divide":
                    if _sane_divisor(ctx.stats.mins[sb], ctx.stats.maxs[sb]):
                        operands = (a, b)
                    elif _sane_divisor(ctx.stats.mins[sa], ctx.stats.maxs[sa]):
                        operands = (b, a)
                    else:
                        continue
                left, right = ctx.subset.get(operands[0]), ctx.subset.get(operands[1])
                candidate = Binary(op, left, right).canonical_name
                if candidate in ctx.subset or candidate in taken or candidate in tried:
                    continue
                taken.add(candidate)
                yield Generate(op, operands), candidate
                break

    # -- proposal assembly -----------------------------------------------------

    def propose(self, ctx: AgentContext) -> AgentProposal:
        if ctx.k_max <= 0:
            return AgentProposal.empty(rationale="generation budget is zero")

        secondary = ctx.last_delta is not None and ctx.last_delta < 0
        actions: list = []
        made: list[str] = []

        # everything this agent added anywhere on its path: never repeat it
        tried = {name for entry in ctx.feedback for name in entry.added}

        if ctx.drops_enabled and ctx.feedback and ctx.feedback[-1].delta <= 0:
            for name in ctx.feedback[-1].added:
                if name in ctx.subset and not isinstance(ctx.subset.get(name), Base):
                    actions.append(Drop(name))

        taken: set[str] = set()
        offset = (self.seed + ctx.iteration) % max(len(_UNARY_PRIMARY), 1)
        unary_family = _UNARY_SECONDARY if secondary else _UNARY_PRIMARY
        binary_family = _BINARY_SECONDARY if secondary else _BINARY_PRIMARY

        if self.strategy == "nonlinear-unary":
            moves = self._unary_moves(ctx, unary_family, taken, offset, tried)
        elif self.strategy == "interaction-binary":
            moves = self._binary_moves(ctx, binary_family, taken, tried)
        else:
            moves = _interleave(
                self._unary_moves(ctx, unary_family, taken, offset, tried),
                self._binary_moves(ctx, binary_family, taken, tried),
                binary_first=secondary,
            )

        for action, name in moves:
            actions.append(action)
            made.append(name)
            if len(made) >= ctx.k_max:
                break

        if not made and self.strategy == "interaction-binary":
            # too few pairable features: degrade to unary transforms
            for action, name in self._unary_moves(ctx, _UNARY_PRIMARY, taken, offset, tried):
                actions.append(action)
                made.append(name)
                if len(made) >= ctx.k_max:
                    break

        mode = "secondary" if secondary else "primary"
        rationale = (
            f"{self.strategy} ({mode}): "
            + (", ".join(made) if made else "no admissible moves left")
        )
        proposal = AgentProposal(actions=tuple(actions), rationale=rationale)
        return validate_proposal(proposal, ctx)


def _arity(op_name: str) -> int:
    try:
        return lookup(op_name).arity
    except Exception:
        return 0


def _interleave(unary_gen, binary_gen, binary_first: bool):
    gens = [binary_gen, unary_gen] if binary_first else [unary_gen, binary_gen]
    alive = [True, True]
    i = 0
    while any(alive):
        if alive[i % 2]:
            try:
                yield next(gens[i % 2])
            except StopIteration:
                alive[i % 2] = False
        i += 1


def scripted_propose(tag: str, seed: int, ctx: AgentContext) -> AgentProposal:
    """Run one scripted policy as a pure function of (tag, seed, ctx)."""
    return ScriptedAgent(agent_id=ctx.agent_id, strategy=tag, seed=seed).propose(ctx)
