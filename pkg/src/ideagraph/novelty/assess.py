"""Novelty-assistant agent loop and score parsing.

The assistant gets one tool (literature search), may issue at most three
distinct queries, and must finish with integer novelty/feasibility ratings
and the TERMINATE token. Failed tool calls are reported back into the chat
so the agent can retry; unparsable scores earn exactly one re-ask.
"""

from __future__ import annotations

import logging
import re
from typing import TYPE_CHECKING

from .. import prompts
from ..errors import AssessmentError, ScoreOutOfRangeError, ScoreParseError
from ..llm.backends import LlmGateway
from ..llm.types import ChatMessage, ChatRequest, ToolSchema
from .scholar import SearchBackend
from .types import MAX_HITS, MAX_QUERIES, NoveltyReport, PaperRecord

if TYPE_CHECKING:
    from ..proposal.schema import ResearchProposal

logger = logging.getLogger(__name__)

SEARCH_TOOL = ToolSchema(
    name="search_literature",
    description=(
        "Search the scholarly literature for publications related to a query. "
        "Returns the ten most relevant papers with titles and abstracts."
    ),
    parameters={"query": {"type": "string", "description": "keyword query to search for"}},
    required=["query"],
)

TERMINATE_RE = re.compile(r"\bTERMINATE\b")
_SCORE_RE = re.compile(r"(?:score\s*:\s*)?(\d{1,2})\s*/\s*10", re.IGNORECASE)

RESCORE_PROMPT = (
    "Your previous reply did not contain valid ratings. Reply again with a line "
    '"Novelty: <n>/10" and a line "Feasibility: <n>/10", each n between 1 and 10, '
    "then state TERMINATE."
)


def parse_scores(text: str) -> tuple[int, int]:
    """Extract (novelty, feasibility) from label-bound n/10 scores.

    For each label, the first score occurring after the label's first
    occurrence is taken, regardless of the order the labels appear in.
    """
    if not text.strip():
        raise ScoreParseError("empty text")
    scores = {}
    for label in ("novelty", "feasibility"):
        match = re.search(rf"\b{label}\b", text, re.IGNORECASE)
        if not match:
            raise ScoreParseError(f"missing {label.capitalize()} label")
        score_match = _SCORE_RE.search(text, match.end())
        if not score_match:
            raise ScoreParseError(f"no score found after {label.capitalize()} label")
        value = int(score_match.group(1))
        if not 1 <= value <= 10:
            raise ScoreOutOfRangeError(f"{label.capitalize()} score {value} outside 1-10")
        scores[label] = value
    return scores["novelty"], scores["feasibility"]


def format_hits(query: str, records: list[PaperRecord]) -> str:
    lines = [f"Top {len(records)} results for query {query!r}:"]
    for i, record in enumerate(records, 1):
        lines.append(f"{i}. {record.title}")
        if record.abstract:
            lines.append(f"   Abstract: {record.abstract}")
    if not records:
        lines.append("(no results)")
    return "\n".join(lines)


def assess_novelty(
    proposal: "ResearchProposal",
    gateway: LlmGateway,
    search: SearchBackend,
    max_rounds: int = 12,
) -> NoveltyReport:
    """Run the novelty-assistant loop and assemble its report."""
    messages = [
        ChatMessage(role="system", content=prompts.load("novelty_assistant")),
        ChatMessage(
            role="user",
            content=prompts.render("task_assess_novelty", hypothesis=proposal.fields["hypothesis"]),
        ),
    ]
    queries: list[str] = []
    hits: dict[str, list[PaperRecord]] = {}
    reasked = False

    for _ in range(max_rounds):
        response = gateway.complete(
            ChatRequest(messages=list(messages), temperature=0.0, tool_schemas=[SEARCH_TOOL])
        )
        if response.tool_calls:
            messages.append(
                ChatMessage(role="assistant", content=response.content, tool_calls=response.tool_calls)
            )
            for call in response.tool_calls:
                result = _run_search_call(call.name, call.arguments, search, queries, hits)
                messages.append(
                    ChatMessage(role="tool", content=result, tool_call_id=call.call_id)
                )
            continue

        messages.append(ChatMessage(role="assistant", content=response.content))
        if not TERMINATE_RE.search(response.content):
            continue
        try:
            novelty, feasibility = parse_scores(response.content)
        except ScoreParseError as exc:
            if reasked:
                raise AssessmentError(
                    f"scores unparsable after re-ask: {exc}", final_message=response.content
                ) from exc
            reasked = True
            messages.append(ChatMessage(role="user", content=RESCORE_PROMPT))
            continue
        return NoveltyReport(
            queries=queries,
            hits=hits,
            novelty=novelty,
            feasibility=feasibility,
            rationale=response.content,
        )
    raise AssessmentError(f"assessment did not conclude within {max_rounds} rounds")


def _run_search_call(
    name: str,
    arguments: dict,
    search: SearchBackend,
    queries: list[str],
    hits: dict[str, list[PaperRecord]],
) -> str:
    if name != SEARCH_TOOL.name:
        return f"Tool call failed: unknown tool {name!r}. please re-call the tool."
    query = str(arguments.get("query", "")).strip()
    if not query:
        return "Tool call failed: parameter 'query' must be a non-empty string. please re-call the tool."
    folded = query.casefold()
    if any(q.casefold() == folded for q in queries):
        return (
            f"Query {query!r} was already searched; issue a different query "
            "or conclude your assessment."
        )
    if len(queries) >= MAX_QUERIES:
        return (
            f"Search limit reached: at most {MAX_QUERIES} literature searches are allowed. "
            "Conclude your assessment from the results you already have."
        )
    try:
        records = search.search(query, limit=MAX_HITS)[:MAX_HITS]
    except Exception as exc:
        logger.warning("literature search failed for %r: %s", query, exc)
        return f"Tool call failed: {exc}. please re-call the tool."
    queries.append(query)
    hits[query] = records
    return format_hits(query, records)
