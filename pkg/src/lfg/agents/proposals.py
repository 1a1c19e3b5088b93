"""Agent proposals: action types, context snapshot, wire grammar.

The wire format is a single fenced code block of directives, one per line:

    GEN <op> <feature>
    GEN <op> <feature> <feature>
    DROP <feature>
    RATIONALE: <free text to the end of the block>

Feature tokens are canonical expression names; operation tokens come from
the registry.  Anything else fails the whole parse with a reason, which
drives the retry loop.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .. import ops
from ..errors import MalformedResponse
from ..evaluation import EvalReport
from ..expr import Base, FeatureSubset

# parse failure reasons (MalformedResponse.reason)
NO_FENCED_BLOCK = "no_fenced_block"
BAD_LINE = "bad_line"
UNKNOWN_OPERATION = "unknown_operation"
UNAVAILABLE_OPERATION = "unavailable_operation"
ARITY_MISMATCH = "arity_mismatch"
UNKNOWN_FEATURE = "unknown_feature"
PROTECTED_FEATURE = "protected_feature"
TOO_MANY_GENERATES = "too_many_generates"
DROPS_DISABLED = "drops_disabled"


@dataclass(frozen=True)
class Generate:
    op: str
    operands: tuple[str, ...]


@dataclass(frozen=True)
class Drop:
    name: str


@dataclass(frozen=True)
class AgentProposal:
    actions: tuple = ()
    rationale: str = ""

    def generates(self) -> list:
        return [a for a in self.actions if isinstance(a, Generate)]

    def drops(self) -> list:
        return [a for a in self.actions if isinstance(a, Drop)]

    @staticmethod
    def empty(rationale: str = "") -> "AgentProposal":
        return AgentProposal(actions=(), rationale=rationale)


@dataclass(frozen=True, eq=False)
class FeatureStats:
    """Train-split summary statistics for the features an agent can see."""

    names: tuple[str, ...]
    means: tuple[float, ...]
    stds: tuple[float, ...]
    mins: tuple[float, ...]
    maxs: tuple[float, ...]
    corr: np.ndarray  # |pearson| between feature pairs, zeros where undefined

    @classmethod
    def from_matrix(cls, names, X) -> "FeatureStats":
        X = np.asarray(X, dtype=np.float64)
        sds = X.std(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            corr = np.corrcoef(X, rowvar=False)
        corr = np.nan_to_num(np.atleast_2d(corr), nan=0.0)
        np.fill_diagonal(corr, 0.0)
        return cls(
            names=tuple(names),
            means=tuple(float(v) for v in X.mean(axis=0)),
            stds=tuple(float(v) for v in sds),
            mins=tuple(float(v) for v in X.min(axis=0)),
            maxs=tuple(float(v) for v in X.max(axis=0)),
            corr=np.abs(corr),
        )

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True, eq=False)
class FeedbackEntry:
    """One prior iteration as the agent saw it: metrics, delta, own actions."""

    iteration: int
    report: EvalReport
    delta: float
    added: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class AgentContext:
    """Immutable snapshot handed to an agent when asking for a proposal."""

    agent_id: str
    subset: FeatureSubset
    feedback: tuple[FeedbackEntry, ...]
    peer_rationales: tuple[tuple[str, str], ...]
    operations: tuple[str, ...]
    k_max: int
    stats: FeatureStats
    drops_enabled: bool = True

    @property
    def iteration(self) -> int:
        return self.feedback[-1].iteration + 1 if self.feedback else 1

    @property
    def last_delta(self) -> float | None:
        return self.feedback[-1].delta if self.feedback else None


def validate_proposal(proposal: AgentProposal, ctx: AgentContext) -> AgentProposal:
    """Check a proposal against the registry and the context subset.

    Raises MalformedResponse with a machine-readable reason on the first
    violation; returns the proposal unchanged when valid.
    """
    n_generates = 0
    for action in proposal.actions:
        if isinstance(action, Generate):
            n_generates += 1
            if n_generates > ctx.k_max:
                raise MalformedResponse(
                    TOO_MANY_GENERATES, f"more than k_max={ctx.k_max} GEN actions"
                )
            try:
                op = ops.lookup(action.op)
            except Exception:
                raise MalformedResponse(UNKNOWN_OPERATION, action.op) from None
            if action.op not in ctx.operations:
                raise MalformedResponse(UNAVAILABLE_OPERATION, action.op)
            if op.arity != len(action.operands):
                raise MalformedResponse(
                    ARITY_MISMATCH,
                    f"{action.op} takes {op.arity} operand(s), got {len(action.operands)}",
                )
            for name in action.operands:
                if name not in ctx.subset:
                    raise MalformedResponse(UNKNOWN_FEATURE, name)
        elif isinstance(action, Drop):
            if not ctx.drops_enabled:
                raise MalformedResponse(DROPS_DISABLED, action.name)
            if action.name not in ctx.subset:
                raise MalformedResponse(UNKNOWN_FEATURE, action.name)
            if isinstance(ctx.subset.get(action.name), Base):
                raise MalformedResponse(
                    PROTECTED_FEATURE, f"{action.name} is an original column"
                )
        else:
            raise MalformedResponse(BAD_LINE, repr(action))
    return proposal


def render_proposal(proposal: AgentProposal) -> str:
    """Serialize a proposal to the wire format (inverse of parse_response)."""
    lines = []
    for action in proposal.actions:
        if isinstance(action, Generate):
            lines.append(f"GEN {action.op} {' '.join(action.operands)}")
        else:
            lines.append(f"DROP {action.name}")
    lines.append(f"RATIONALE: {proposal.rationale}")
    body = "\n".join(lines)
    return f"```\n{body}\n```"


_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


def parse_response(text: str, ctx: AgentContext) -> AgentProposal:
    """Parse the first fenced block of an agent reply into a valid proposal."""
    match = _FENCE_RE.search(text)
    if match is None:
        raise MalformedResponse(NO_FENCED_BLOCK)
    lines = match.group(1).split("\n")
    actions = []
    rationale = ""
    for i, line in enumerate(lines):
        if line.startswith("RATIONALE:"):
            rest = line[len("RATIONALE:") :]
            if rest.startswith(" "):
                rest = rest[1:]
            tail = lines[i + 1 :]
            while tail and tail[-1] == "":
                tail.pop()
            rationale = "\n".join([rest] + tail)
            break
        if not line.strip():
            continue
        tokens = line.split()
        if tokens[0] == "GEN" and len(tokens) in (3, 4):
            actions.append(Generate(op=tokens[1], operands=tuple(tokens[2:])))
        elif tokens[0] == "DROP" and len(tokens) == 2:
            actions.append(Drop(name=tokens[1]))
        else:
            raise MalformedResponse(BAD_LINE, line)
    proposal = AgentProposal(actions=tuple(actions), rationale=rationale)
    return validate_proposal(proposal, ctx)
