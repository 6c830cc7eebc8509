"""Prompt catalog: every template the orchestrators send, shipped as data.

Templates live in catalog/*.txt. Placeholders use {name} syntax and are
filled by literal string replacement (no format-string escaping), so
template bodies may contain braces freely. A template's trailing newline is
stripped on load; what render() returns is exactly what goes on the wire.
"""

from __future__ import annotations

from importlib import resources

_CACHE: dict[str, str] = {}

CATALOG_NAMES = (
    "planner",
    "assistant",
    "ontologist",
    "scientist_proposer",
    "scientist_groupchat",
    "scientist_expander",
    "critic",
    "novelty_assistant",
    "select_speaker",
    "task_define_concepts",
    "task_propose",
    "task_expand_aspect",
    "task_critical_review",
    "task_modeling_priorities",
    "task_synbio_priorities",
    "task_assess_novelty",
)


def load(name: str) -> str:
    """Raw template text for a catalog entry."""
    if name not in _CACHE:
        if name not in CATALOG_NAMES:
            raise KeyError(f"unknown prompt template {name!r}")
        text = resources.files(__package__).joinpath(f"catalog/{name}.txt").read_text("utf-8")
        _CACHE[name] = text.removesuffix("\n")
    return _CACHE[name]


def render(name: str, **substitutions: str) -> str:
    """Template with each {key} placeholder replaced by its value."""
    text = load(name)
    for key, value in substitutions.items():
        text = text.replace("{" + key + "}", value)
    return text
