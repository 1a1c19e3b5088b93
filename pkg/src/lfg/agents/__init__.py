"""Proposal agents: deterministic scripted policies and LLM-backed agents."""

from .llm import API_KEY_ENV, HttpChatTransport, LLMAgent
from .prompts import PromptTemplate, build_prompt
from .proposals import (
    AgentContext,
    AgentProposal,
    Drop,
    FeatureStats,
    FeedbackEntry,
    Generate,
    parse_response,
    render_proposal,
    validate_proposal,
)
from .scripted import STRATEGIES, ScriptedAgent, scripted_propose

__all__ = [
    "API_KEY_ENV",
    "AgentContext",
    "AgentProposal",
    "Drop",
    "FeatureStats",
    "FeedbackEntry",
    "Generate",
    "HttpChatTransport",
    "LLMAgent",
    "PromptTemplate",
    "STRATEGIES",
    "ScriptedAgent",
    "build_prompt",
    "parse_response",
    "render_proposal",
    "scripted_propose",
    "validate_proposal",
]
