"""Prompt construction for LLM-backed agents.

Prompts have three fixed sections, in order: the feature-engineering brief
(task, feature statistics, available operations), the refinement history
(feedback table plus peer rationales), and the output-format contract.
"""

from __future__ import annotations

from dataclasses import dataclass

from .proposals import AgentContext

DEFAULT_TASK = (
    "You are an expert feature engineer for a tabular classification task. "
    "Construct new feature columns from the existing ones so that a simple "
    "downstream classifier separates the classes better."
)


@dataclass(frozen=True)
class PromptTemplate:
    task_description: str = DEFAULT_TASK
    extra_guidance: str = ""


def _feature_lines(ctx: AgentContext) -> list[str]:
    lines = []
    for i, name in enumerate(ctx.stats.names):
        lines.append(
            f"- {name}: mean={ctx.stats.means[i]:.4g} std={ctx.stats.stds[i]:.4g} "
            f"min={ctx.stats.mins[i]:.4g} max={ctx.stats.maxs[i]:.4g}"
        )
    return lines


def _feedback_lines(ctx: AgentContext) -> list[str]:
    if not ctx.feedback:
        return ["There is no prior feedback yet; this is the first iteration."]
    lines = ["iteration | accuracy | precision | recall | f1 | delta"]
    for entry in ctx.feedback:
        r = entry.report
        lines.append(
            f"{entry.iteration} | {r.accuracy:.4f} | {r.precision:.4f} | "
            f"{r.recall:.4f} | {r.f1:.4f} | {entry.delta:+.4f}"
        )
        for note in entry.notes:
            lines.append(f"  note: {note}")
    return lines


def _peer_lines(ctx: AgentContext) -> list[str]:
    if not ctx.peer_rationales:
        return ["(none)"]
    return [f"- {agent_id}: {text}" for agent_id, text in ctx.peer_rationales]


def build_prompt(ctx: AgentContext, template: PromptTemplate | None = None) -> str:
    template = template or PromptTemplate()
    grammar = [
        "GEN <op> <feature>            (unary operation)",
        "GEN <op> <feature> <feature>  (binary operation)",
    ]
    if ctx.drops_enabled:
        grammar.append("DROP <feature>                (remove a generated feature)")
    grammar.append("RATIONALE: <free text explaining your strategy>")

    parts = [
        "# Feature Engineering",
        template.task_description,
    ]
    if template.extra_guidance:
        parts.append(template.extra_guidance)
    parts += [
        f"Current features ({len(ctx.stats.names)}), with training-split statistics:",
        *_feature_lines(ctx),
        "Available operations: " + ", ".join(ctx.operations),
        f"You may emit at most {ctx.k_max} GEN actions.",
        "",
        "# Iterative Refinement and Evaluation",
        *_feedback_lines(ctx),
        "Peer rationales from the previous layer:",
        *_peer_lines(ctx),
        "",
        "# Markdown and Organization",
        "Reply with exactly one fenced code block. Inside it, one directive per line:",
        *grammar,
        "Copy feature names exactly as listed above. Unknown operations,",
        "unknown features or wrong operand counts invalidate the whole reply.",
    ]
    return "\n".join(parts)
