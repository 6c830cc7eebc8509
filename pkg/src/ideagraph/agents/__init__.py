from .groupchat import (
    GroupChatConfig,
    GroupChatResult,
    fallback_speaker,
    run_group_chat,
    select_next_speaker,
)
from .profiles import (
    AGENT_NAMES,
    FALLBACK_ORDER,
    AgentProfile,
    AgentRoster,
    group_chat_roster,
)
from .scripted import PipelineResult, ScriptedPipelineConfig, run_scripted_pipeline
from .tools import ToolContext, ToolDescriptor, ToolRegistry, build_default_registry
from .transcript import Transcript, TranscriptEntry

__all__ = [
    "AGENT_NAMES",
    "FALLBACK_ORDER",
    "AgentProfile",
    "AgentRoster",
    "GroupChatConfig",
    "GroupChatResult",
    "PipelineResult",
    "ScriptedPipelineConfig",
    "ToolContext",
    "ToolDescriptor",
    "ToolRegistry",
    "Transcript",
    "TranscriptEntry",
    "build_default_registry",
    "fallback_speaker",
    "group_chat_roster",
    "run_group_chat",
    "run_scripted_pipeline",
    "select_next_speaker",
]
