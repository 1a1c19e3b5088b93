import pytest

from lfg.agents import LLMAgent, ScriptedAgent
from lfg.config import RunConfig, build_agents, load_config, parse_config
from lfg.errors import ConfigError


def test_defaults_match_documented_values():
    cfg = RunConfig()
    assert cfg.train_fraction == 0.55
    assert cfg.agents == 3
    assert cfg.k_max == 3
    assert cfg.iterations == 10
    assert cfg.mcts_rounds == 5
    assert cfg.mcts_select == 2
    assert cfg.exploration_c == pytest.approx(1.4142)
    assert cfg.patience == 3
    assert cfg.knn_k == 5
    assert cfg.tree_max_depth == 8
    assert cfg.tree_min_leaf == 5
    assert cfg.metric == "accuracy"


def test_parse_and_snapshot_round_trip():
    cfg = RunConfig(dataset="d.csv", seed=42, agents=2, metric="f1", drops_enabled=False)
    again = parse_config(cfg.snapshot())
    assert again == cfg


def test_parse_comments_and_blanks():
    cfg = parse_config("# a comment\n\nseed = 9\nmodel=decision_tree\n")
    assert cfg.seed == 9
    assert cfg.model == "decision_tree"


@pytest.mark.parametrize(
    "text",
    [
        "unknown_key = 1",
        "seed = not-a-number",
        "just some words",
        "drops_enabled = perhaps",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_validate_catches_problems(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig(dataset="").validate()
    with pytest.raises(ConfigError):
        RunConfig(dataset="missing.csv").validate()
    data = tmp_path / "d.csv"
    data.write_text("x,label\n1,0\n")
    with pytest.raises(ConfigError):
        RunConfig(dataset=str(data), train_fraction=1.5).validate(check_files=False)
    with pytest.raises(ConfigError):
        RunConfig(dataset=str(data), model="svm").validate(check_files=False)
    with pytest.raises(ConfigError):
        RunConfig(dataset=str(data), agent_kinds=("llm",)).validate(check_files=False)
    RunConfig(dataset=str(data)).validate()


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.cfg")


def test_build_agents_cycles_strategies():
    cfg = RunConfig(dataset="d", agents=4)
    agents = build_agents(cfg)
    assert [a.agent_id for a in agents] == ["agent-1", "agent-2", "agent-3", "agent-4"]
    assert all(isinstance(a, ScriptedAgent) for a in agents)
    assert [a.strategy for a in agents] == [
        "nonlinear-unary",
        "interaction-binary",
        "balanced",
        "nonlinear-unary",
    ]
    seeds = {a.seed for a in agents}
    assert len(seeds) == 4


def test_build_agents_llm_kind():
    cfg = RunConfig(
        dataset="d",
        agents=2,
        agent_kinds=("scripted", "llm"),
        llm_base_url="http://localhost:1",
        llm_model="m",
    )
    agents = build_agents(cfg)
    assert isinstance(agents[0], ScriptedAgent)
    assert isinstance(agents[1], LLMAgent)
    assert agents[1].transport.model == "m"
