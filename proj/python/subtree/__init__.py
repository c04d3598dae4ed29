"""Exact decision-tree solving and subtree perfectness checks.

Problems and models are passed as JSON text (the same files the command line
reads); results come back as dicts with rationals as "p/q" strings.
"""

import json
from pathlib import Path

from . import _core
from ._core import SubtreeError, choice_names

__all__ = [
    "SubtreeError",
    "check",
    "check_node",
    "choice_names",
    "export_dot",
    "fuzz",
    "run",
    "solve",
    "strategies",
]


def _text(source):
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, dict):
        return json.dumps(source)
    return source or ""


def strategies(problem):
    return json.loads(_core.strategies(_text(problem)))


def solve(problem, model, choice, condition=""):
    return json.loads(_core.solve(_text(problem), _text(model), choice, condition))


def check(problem, model, choice):
    return json.loads(_core.check(_text(problem), _text(model), choice))


def check_node(problem, model, choice, node):
    return json.loads(_core.check_node(_text(problem), _text(model), choice, node))


def fuzz(choice, sampler="credal(k=2)", seed=1, trees=200):
    return json.loads(_core.fuzz(choice, sampler, seed, trees))


def export_dot(problem):
    return _core.export_dot(_text(problem))


def run(*args):
    """Runs the command line in-process; returns (exit code, stdout, stderr)."""
    return _core.run([str(a) for a in args])
