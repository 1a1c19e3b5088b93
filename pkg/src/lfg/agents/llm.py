"""LLM-backed agent speaking the wire protocol over an HTTP chat endpoint."""

from __future__ import annotations

import os

import requests

from ..errors import AgentUnavailable, MalformedResponse
from .prompts import PromptTemplate, build_prompt
from .proposals import AgentContext, AgentProposal, parse_response

API_KEY_ENV = "LFG_LLM_API_KEY"
DEFAULT_RETRIES = 2

_SYSTEM_MESSAGE = (
    "You are a feature-engineering expert. Follow the output grammar in the "
    "prompt exactly; reply with a single fenced code block."
)


class TransportFailure(Exception):
    """Internal: one failed round trip to the endpoint."""


class HttpChatTransport:
    """Minimal OpenAI-compatible chat-completions client.

    POSTs {model, messages, temperature} to <base_url>/chat/completions and
    returns choices[0].message.content.  The bearer token is read from the
    LFG_LLM_API_KEY environment variable unless given explicitly.
    """

    def __init__(self, base_url, model, temperature=0.2, timeout=60.0, api_key=None):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.temperature = temperature
        self.timeout = timeout
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")

    def complete(self, messages) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "messages": list(messages),
            "temperature": self.temperature,
        }
        try:
            resp = requests.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as err:
            raise TransportFailure(str(err)) from err
        if resp.status_code >= 400:
            raise TransportFailure(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as err:
            raise TransportFailure(f"unexpected response payload: {err}") from err


class LLMAgent:
    """Asks the endpoint for a proposal, retrying malformed replies.

    After the retry budget is spent, a malformed reply degrades to an empty
    proposal (so a confused agent cannot kill a run), while persistent
    transport failures raise AgentUnavailable.
    """

    kind = "llm"

    def __init__(self, agent_id, transport, template=None, retries=DEFAULT_RETRIES):
        self.agent_id = agent_id
        self.transport = transport
        self.template = template or PromptTemplate()
        self.retries = retries

    def propose(self, ctx: AgentContext) -> AgentProposal:
        prompt = build_prompt(ctx, self.template)
        note = ""
        last_reason = None
        for attempt in range(self.retries + 1):
            messages = [
                {"role": "system", "content": _SYSTEM_MESSAGE},
                {"role": "user", "content": prompt + note},
            ]
            try:
                text = self.transport.complete(messages)
            except TransportFailure as err:
                if attempt == self.retries:
                    raise AgentUnavailable(
                        f"{self.agent_id}: transport failed after {attempt + 1} attempts: {err}"
                    ) from err
                continue
            try:
                return parse_response(text, ctx)
            except MalformedResponse as err:
                last_reason = err.reason
                note = (
                    f"\n\nYour previous reply was rejected ({err.reason}: {err.detail}). "
                    "Follow the output grammar exactly."
                )
        return AgentProposal.empty(
            rationale=f"error: replies stayed malformed after retries ({last_reason})"
        )
