"""Run configuration: a flat key = value file, diffable and snapshot-able."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

from .agents import HttpChatTransport, LLMAgent, ScriptedAgent
from .agents.scripted import STRATEGIES
from .errors import ConfigError
from .evaluation import MODEL_KINDS, ModelSpec

_TRUE = {"true", "1", "yes", "on"}
_FALSE = {"false", "0", "no", "off"}


def _parse_bool(raw: str) -> bool:
    low = raw.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ConfigError(f"not a boolean: {raw!r}")


def _parse_tuple(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


@dataclass
class RunConfig:
    dataset: str = ""
    label_column: str = "label"
    drop_missing: bool = False
    train_fraction: float = 0.55
    seed: int = 0
    agents: int = 3
    agent_kinds: tuple[str, ...] = ("scripted",)
    agent_strategies: tuple[str, ...] = STRATEGIES
    k_max: int = 3
    max_depth: int = 4
    iterations: int = 10
    mcts_rounds: int = 5
    mcts_select: int = 2
    exploration_c: float = 1.4142
    patience: int = 3
    model: str = "knn"
    knn_k: int = 5
    tree_max_depth: int = 8
    tree_min_leaf: int = 5
    metric: str = "accuracy"
    drops_enabled: bool = True
    partition_base_columns: bool = False
    llm_base_url: str = ""
    llm_model: str = ""
    llm_temperature: float = 0.2
    llm_timeout: float = 60.0
    output_dir: str = "runs"

    def validate(self, check_files: bool = True) -> "RunConfig":
        if not self.dataset:
            raise ConfigError("dataset path is required")
        if check_files and not os.path.exists(self.dataset):
            raise ConfigError(f"dataset file not found: {self.dataset}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in (0, 1)")
        for name in (
            "agents",
            "k_max",
            "max_depth",
            "iterations",
            "mcts_rounds",
            "mcts_select",
            "patience",
            "knn_k",
            "tree_max_depth",
            "tree_min_leaf",
        ):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.agents < 1:
            raise ConfigError("at least one agent is required")
        if self.model not in MODEL_KINDS:
            raise ConfigError(f"model must be one of {MODEL_KINDS}")
        if self.metric not in ("accuracy", "precision", "recall", "f1"):
            raise ConfigError(f"unknown metric {self.metric!r}")
        for kind in self.agent_kinds:
            if kind not in ("scripted", "llm"):
                raise ConfigError(f"agent kind must be scripted or llm, got {kind!r}")
        for strategy in self.agent_strategies:
            if strategy not in STRATEGIES:
                raise ConfigError(f"unknown scripted strategy {strategy!r}")
        if "llm" in self.agent_kinds and not self.llm_base_url:
            raise ConfigError("llm agents need llm_base_url")
        return self

    def model_spec(self) -> ModelSpec:
        return ModelSpec(
            kind=self.model,
            knn_k=self.knn_k,
            tree_max_depth=self.tree_max_depth,
            tree_min_leaf=self.tree_min_leaf,
        )

    def snapshot(self) -> str:
        """Canonical text form; parsing it back reproduces this config."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


_CASTERS = {
    str: lambda raw: raw,
    int: lambda raw: int(raw),
    float: lambda raw: float(raw),
    bool: _parse_bool,
}


def parse_config(text: str) -> RunConfig:
    config = RunConfig()
    known = {f.name: f for f in fields(RunConfig)}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        current = getattr(config, key)
        try:
            if isinstance(current, tuple):
                value = _parse_tuple(raw)
            else:
                value = _CASTERS[type(current)](raw)
        except (ValueError, ConfigError) as err:
            raise ConfigError(f"line {lineno}: bad value for {key}: {err}") from None
        setattr(config, key, value)
    return config


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None


def build_agents(config: RunConfig) -> list:
    """Instantiate the agent roster; kinds and strategies cycle when the
    lists are shorter than the agent count."""
    agents = []
    for i in range(config.agents):
        kind = config.agent_kinds[i % len(config.agent_kinds)]
        agent_id = f"agent-{i + 1}"
        if kind == "scripted":
            strategy = config.agent_strategies[i % len(config.agent_strategies)]
            agents.append(
                ScriptedAgent(agent_id, strategy, seed=config.seed * 1009 + i)
            )
        else:
            transport = HttpChatTransport(
                base_url=config.llm_base_url,
                model=config.llm_model,
                temperature=config.llm_temperature,
                timeout=config.llm_timeout,
            )
            agents.append(LLMAgent(agent_id, transport))
    return agents
