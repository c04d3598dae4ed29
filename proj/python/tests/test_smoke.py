import os
from pathlib import Path

import pytest

import subtree

DATA = Path(os.environ.get("SUBTREE_DATA_DIR", Path(__file__).resolve().parents[2] / "data")) / "problems"


def files(name):
    return DATA / f"{name}.tree.json", DATA / f"{name}.model.json"


def test_six_strategies():
    assert subtree.strategies(DATA / "fig6.tree.json")["count"] == 6


def test_first_eu_example():
    tree, model = files("eu1")
    out = subtree.solve(tree, model, "eu")
    scores = [s["scores"]["expectation"] for s in out["strategies"]]
    assert scores == ["6/5", "1/1", "9/5", "2/1"]
    assert out["solution"] == [4]


def test_zero_probability_example_fails_at_n1():
    tree, model = files("eu3")
    report = subtree.check(tree, model, "eu")
    assert report["perfect"] is False
    failing = [v["node"] for v in report["verdicts"] if v["outcome"] == "fail"]
    assert failing == ["N1"]


def test_gamma_maximin_reversal():
    tree, model = files("fig23")
    v = subtree.check_node(tree, model, "gamma-maximin", "N1")
    assert v["outcome"] == "fail"
    assert v["reversal"] is True
    local = {row["path"]: row["local_scores"]["lower"] for row in v["subtree"]}
    assert sorted(local.values()) == ["-2/5", "0/1"]


def test_errors_raise():
    tree, _ = files("eu1")
    with pytest.raises(subtree.SubtreeError, match="unknown"):
        subtree.solve(tree, "", "no-such-choice")
    with pytest.raises(ValueError):
        subtree.strategies('{"atoms": ["a"], "tree": {"id": "L", "kind": "leaf", "reward": 0.5}}')


def test_cli_exit_codes():
    tree, model = files("fig22")
    code, out, _ = subtree.run("check", "--tree", tree, "--model", model, "--choice", "maximin")
    assert code == 1
    assert "N2: fail" in out
    code, _, err = subtree.run("solve", "--tree", tree)
    assert code == 2
    assert err.count("\n") == 1


def test_fuzz_is_deterministic():
    a = subtree.fuzz("maximality", trees=40, seed=2)
    b = subtree.fuzz("maximality", trees=40, seed=2)
    assert a == b
    assert a["trees"] == 40


def test_dot():
    text = subtree.export_dot(DATA / "fig1.tree.json")
    assert text.startswith('digraph "tree" {')
    assert text.count("shape=box") == 2
