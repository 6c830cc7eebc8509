"""Agent roster: role names, system messages, and capabilities."""

from __future__ import annotations

from dataclasses import dataclass

from .. import prompts
from ..errors import ConfigError

HUMAN = "human"
PLANNER = "planner"
ASSISTANT = "assistant"
ONTOLOGIST = "ontologist"
SCIENTIST_1 = "scientist_1"
SCIENTIST_2 = "scientist_2"
CRITIC = "critic"

AGENT_NAMES = (HUMAN, PLANNER, ASSISTANT, ONTOLOGIST, SCIENTIST_1, SCIENTIST_2, CRITIC)

# fallback rotation when the manager's pick is unparsable; human never auto-speaks
FALLBACK_ORDER = (PLANNER, ASSISTANT, ONTOLOGIST, SCIENTIST_1, SCIENTIST_2, CRITIC)

ROLE_SUMMARIES = {
    HUMAN: "poses the task and may intervene with guidance",
    PLANNER: "suggests a detailed plan to solve the task",
    ASSISTANT: "calls the available tools and reports their results",
    ONTOLOGIST: "defines the concepts and relationships in the knowledge path",
    SCIENTIST_1: "drafts the seven-part research proposal",
    SCIENTIST_2: "expands and refines aspects of the proposal",
    CRITIC: "reviews the proposal and identifies modeling/experimental priorities",
}


@dataclass(frozen=True)
class AgentProfile:
    name: str
    system_message: str
    can_execute_tools: bool = False
    context_policy: str = "shared_memory"  # or "filtered"

    def __post_init__(self):
        if self.name not in AGENT_NAMES:
            raise ConfigError("name", f"unknown agent name {self.name!r}")
        if self.can_execute_tools and self.name != ASSISTANT:
            raise ConfigError(
                "can_execute_tools", f"only {ASSISTANT!r} may execute tools, not {self.name!r}"
            )
        if self.context_policy not in ("filtered", "shared_memory"):
            raise ConfigError("context_policy", f"unknown policy {self.context_policy!r}")


class AgentRoster:
    """Exactly one profile per role name."""

    def __init__(self, profiles: list[AgentProfile]):
        self.by_name: dict[str, AgentProfile] = {}
        for profile in profiles:
            if profile.name in self.by_name:
                raise ConfigError("roster", f"duplicate profile for {profile.name!r}")
            self.by_name[profile.name] = profile
        self.order = [p.name for p in profiles]

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def __getitem__(self, name: str) -> AgentProfile:
        return self.by_name[name]

    def names(self) -> list[str]:
        return list(self.order)

    def require_complete(self):
        missing = [n for n in AGENT_NAMES if n not in self.by_name]
        if missing:
            raise ConfigError("roster", f"missing profiles: {missing}")


def group_chat_roster() -> AgentRoster:
    """The full seven-role roster with shared-memory context."""
    return AgentRoster(
        [
            AgentProfile(HUMAN, system_message="", context_policy="shared_memory"),
            AgentProfile(PLANNER, prompts.load("planner")),
            AgentProfile(ASSISTANT, prompts.load("assistant"), can_execute_tools=True),
            AgentProfile(ONTOLOGIST, prompts.load("ontologist")),
            AgentProfile(SCIENTIST_1, prompts.load("scientist_groupchat")),
            AgentProfile(SCIENTIST_2, prompts.load("scientist_expander")),
            AgentProfile(CRITIC, prompts.load("critic")),
        ]
    )
