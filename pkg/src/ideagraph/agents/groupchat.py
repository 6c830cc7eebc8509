"""Autonomous group chat: manager-selected speakers, tools, human steering.

Each cycle the manager reads the transcript tail and picks the next
speaker; that agent sees the conversation through its context policy and
replies. Tool calls route through the assistant's registry and their
results land in the transcript before anyone speaks again. A standalone
TERMINATE token (case-sensitive word) ends the session; otherwise the turn
cap does. Queued human messages are injected between turns, never mid-turn.
"""

from __future__ import annotations

import json
import logging
import queue as queue_module
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .. import prompts
from ..errors import ConfigError
from ..llm.backends import LlmGateway
from ..llm.types import ChatMessage, ChatRequest
from ..novelty.types import NoveltyReport
from ..proposal.document import ResearchDocument
from ..proposal.schema import ResearchProposal, canonical_key, parse_proposal
from .profiles import ASSISTANT, CRITIC, FALLBACK_ORDER, HUMAN, ONTOLOGIST, ROLE_SUMMARIES, SCIENTIST_1, SCIENTIST_2, AgentRoster
from .tools import ToolContext, ToolRegistry
from .transcript import Transcript

logger = logging.getLogger(__name__)

TERMINATE_RE = re.compile(r"\bTERMINATE\b")
MANAGER = "manager"


@dataclass
class GroupChatConfig:
    max_turns: int = 30
    seed: int = 0
    temperature: float = 0.7
    select_temperature: float = 0.0
    max_output_tokens: int = 4096
    human_timeout: float = 0.0  # seconds to wait when the manager picks the human

    def __post_init__(self):
        if self.max_turns < 1:
            raise ConfigError("max_turns", f"must be >= 1, got {self.max_turns}")


@dataclass
class GroupChatResult:
    transcript: Transcript
    document: Optional[ResearchDocument] = None


def fallback_speaker(previous: str) -> str:
    """Next roster member after the previous speaker in fixed order."""
    if previous in FALLBACK_ORDER:
        idx = FALLBACK_ORDER.index(previous)
        return FALLBACK_ORDER[(idx + 1) % len(FALLBACK_ORDER)]
    return FALLBACK_ORDER[0]


def select_next_speaker(
    transcript: Transcript,
    roster: AgentRoster,
    gateway: LlmGateway,
    previous_speaker: str = HUMAN,
    temperature: float = 0.0,
) -> str:
    """Ask the manager backend for the next speaker name.

    The reply must contain a roster name on a line by itself
    (case-insensitive). Anything else falls back to the fixed rotation and
    leaves a warning entry in the transcript.
    """
    role_lines = "\n".join(f"- {name}: {ROLE_SUMMARIES[name]}" for name in roster.names())
    prompt = prompts.render(
        "select_speaker", role_lines=role_lines, transcript_tail=transcript.tail_text()
    )
    reply = gateway.complete(
        ChatRequest(messages=[ChatMessage(role="user", content=prompt)], temperature=temperature)
    ).content
    lower_names = {name.lower(): name for name in roster.names()}
    for line in reply.splitlines():
        candidate = lower_names.get(line.strip().lower())
        if candidate:
            return candidate
    fallback = fallback_speaker(previous_speaker)
    transcript.append(
        MANAGER,
        "message",
        f"speaker selection fell back to {fallback!r}; unparsable reply: {reply.strip()!r}",
    )
    logger.warning("unparsable speaker reply %r; falling back to %s", reply, fallback)
    return fallback


def run_group_chat(
    task: str,
    roster: AgentRoster,
    tools: ToolRegistry,
    cfg: GroupChatConfig,
    gateway: LlmGateway,
    manager_gateway: Optional[LlmGateway] = None,
    tool_context: Optional[ToolContext] = None,
    human_queue: Optional[queue_module.Queue] = None,
    on_entry: Optional[Callable] = None,
    on_status: Optional[Callable[[str], None]] = None,
) -> GroupChatResult:
    """Drive the chat until TERMINATE or the turn cap; never raises mid-chat
    for tool failures (they are surfaced as tool_result error text)."""
    roster.require_complete()
    manager_gateway = manager_gateway or gateway
    transcript = Transcript()

    def emit(entry):
        if on_entry:
            on_entry(entry)

    emit(transcript.append(HUMAN, "message", task))
    previous_speaker = HUMAN
    turns = 0
    call_counter = [0]

    while turns < cfg.max_turns and not transcript.terminated:
        _drain_human_queue(transcript, human_queue, emit)
        speaker = select_next_speaker(
            transcript, roster, manager_gateway, previous_speaker, cfg.select_temperature
        )
        if speaker == HUMAN:
            intervened = _await_human(transcript, human_queue, cfg.human_timeout, emit, on_status)
            if not intervened:
                speaker = fallback_speaker(previous_speaker)
                emit(
                    transcript.append(
                        MANAGER, "message",
                        f"no human input available; continuing with {speaker!r}",
                    )
                )
            else:
                previous_speaker = HUMAN
                continue

        profile = roster[speaker]
        request = ChatRequest(
            messages=_messages_for(profile, transcript),
            temperature=cfg.temperature,
            max_output_tokens=cfg.max_output_tokens,
            tool_schemas=tools.schemas() if profile.can_execute_tools else [],
        )
        response = gateway.complete(request)

        if response.tool_calls:
            if response.content.strip():
                emit(transcript.append(speaker, "message", response.content))
            for call in response.tool_calls:
                call_counter[0] += 1
                call_id = call.call_id or f"call_{call_counter[0]:04d}"
                emit(
                    transcript.append(
                        speaker, "tool_call",
                        json.dumps({"name": call.name, "arguments": call.arguments}, sort_keys=True),
                        call_id=call_id,
                    )
                )
                result = tools.invoke(call.name, call.arguments)
                emit(transcript.append(speaker, "tool_result", result, call_id=call_id))
        else:
            emit(transcript.append(speaker, "message", response.content))
            if TERMINATE_RE.search(response.content):
                emit(transcript.append(speaker, "termination", ""))
                break
        previous_speaker = speaker
        turns += 1

    document = _harvest_document(transcript, tool_context)
    return GroupChatResult(transcript=transcript, document=document)


def _drain_human_queue(transcript: Transcript, human_queue, emit):
    if human_queue is None:
        return
    while True:
        try:
            text = human_queue.get_nowait()
        except queue_module.Empty:
            return
        emit(transcript.append(HUMAN, "human_intervention", text))


def _await_human(transcript, human_queue, timeout, emit, on_status) -> bool:
    if human_queue is None:
        return False
    if on_status:
        on_status("awaiting_human")
    try:
        text = human_queue.get(timeout=timeout) if timeout else human_queue.get_nowait()
    except queue_module.Empty:
        return False
    finally:
        if on_status:
            on_status("running")
    emit(transcript.append(HUMAN, "human_intervention", text))
    return True


def _messages_for(profile, transcript: Transcript) -> list[ChatMessage]:
    """Flatten the transcript view into a chat request for one speaker.

    shared_memory shows everything; filtered shows only the human's entries
    and the agent's own. Other agents' text arrives as user messages tagged
    with the author; the speaker's own prior messages come back as
    assistant turns.
    """
    messages: list[ChatMessage] = []
    if profile.system_message:
        messages.append(ChatMessage(role="system", content=profile.system_message))
    for entry in transcript:
        if profile.context_policy == "filtered" and entry.author not in (HUMAN, profile.name):
            continue
        if entry.kind == "termination":
            continue
        if entry.author == profile.name and entry.kind == "message":
            messages.append(ChatMessage(role="assistant", content=entry.content))
        elif entry.kind in ("tool_call", "tool_result"):
            messages.append(
                ChatMessage(role="user", content=f"[{entry.kind}] {entry.author}: {entry.content}")
            )
        else:
            messages.append(ChatMessage(role="user", content=f"{entry.author}: {entry.content}"))
    if not messages:
        messages.append(ChatMessage(role="user", content="(conversation start)"))
    return messages


def _harvest_document(
    transcript: Transcript, ctx: Optional[ToolContext]
) -> Optional[ResearchDocument]:
    """Best-effort document assembly from chat artifacts; None when the chat
    did not produce every mandatory part."""
    sample = ctx.last_sample if ctx else None
    if sample is None:
        return None
    proposal: Optional[ResearchProposal] = None
    expanded_graph = ""
    expansions: dict[str, str] = {}
    critique = ""
    for entry in transcript:
        if entry.kind != "message":
            continue
        if entry.author == ONTOLOGIST:
            expanded_graph = entry.content
        elif entry.author == SCIENTIST_1:
            try:
                proposal = parse_proposal(entry.content)
            except Exception:
                pass
        elif entry.author == SCIENTIST_2:
            heading = re.search(r"^###\s*Expanded\s+(.+?)\s*$", entry.content, re.MULTILINE)
            if heading:
                key = canonical_key(heading.group(1))
                if key:
                    expansions[key] = entry.content
        elif entry.author == CRITIC:
            critique = entry.content
    report = ctx.last_report if ctx else None
    if not (proposal and expanded_graph and expansions and critique):
        return None
    modeling = _extract_section(critique, "molecular modeling") or critique
    synbio = _extract_section(critique, "synthetic biology") or critique
    try:
        return ResearchDocument(
            start_node=sample.labels[0],
            end_node=sample.labels[-1],
            path_string=sample.path_string,
            expanded_graph=expanded_graph,
            proposal=proposal,
            expansions=expansions,
            critique=critique,
            modeling_priorities=modeling,
            synbio_priorities=synbio,
            novelty_report=report if isinstance(report, NoveltyReport) else None,
        )
    except Exception:
        return None


def _extract_section(text: str, marker: str) -> str:
    """Paragraph starting at the first line mentioning the marker."""
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if marker.lower() in line.lower():
            block = [line]
            for following in lines[i + 1 :]:
                if not following.strip():
                    break
                block.append(following)
            return "\n".join(block)
    return ""
