"""Seven-key research proposal schema: parsing, aliases, rendering.

Model replies arrive as JSON wrapped in fences, prose, or numbered keys
("1- hypothesis"). Parsing extracts the outermost object, maps every key
through a closed alias table, and keeps anything unrecognized in an extras
sidecar instead of dropping it.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import ArgumentError, ProposalParseError, ProposalSchemaError
from .. import prompts

PROPOSAL_KEYS = (
    "hypothesis",
    "outcome",
    "mechanisms",
    "design_principles",
    "unexpected_properties",
    "comparison",
    "novelty",
)

_NUMBER_PREFIX = re.compile(r"^\s*\d+\s*[-).:]?\s*")


@dataclass
class ResearchProposal:
    """Exactly the seven canonical fields, in canonical order, all non-empty."""

    fields: dict[str, str]
    extras: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        missing = [k for k in PROPOSAL_KEYS if not str(self.fields.get(k, "")).strip()]
        if missing:
            raise ProposalSchemaError(missing)
        self.fields = {k: str(self.fields[k]) for k in PROPOSAL_KEYS}

    def __getitem__(self, key: str) -> str:
        return self.fields[key]

    @property
    def hypothesis(self) -> str:
        return self.fields["hypothesis"]


def canonical_key(raw: str) -> str | None:
    """Map a raw JSON key to a canonical proposal key, or None if unknown."""
    cleaned = _NUMBER_PREFIX.sub("", raw.strip().lower())
    cleaned = re.sub(r"[\s\-]+", "_", cleaned).strip("_")
    return cleaned if cleaned in PROPOSAL_KEYS else None


def extract_json_object(text: str) -> dict:
    """Outermost JSON object in a reply, tolerating code fences and prose."""
    if not text.strip():
        raise ProposalParseError("empty response")
    candidates = [text]
    fenced = re.findall(r"```(?:json)?\s*(.*?)```", text, flags=re.DOTALL)
    candidates.extend(fenced)
    for candidate in candidates:
        start = candidate.find("{")
        end = candidate.rfind("}")
        if start == -1 or end <= start:
            continue
        snippet = candidate[start : end + 1]
        try:
            obj = json.loads(snippet)
        except ValueError:
            # tolerate a trailing comma before the closing brace
            try:
                obj = json.loads(re.sub(r",\s*}", "}", snippet))
            except ValueError:
                continue
        if isinstance(obj, dict):
            return obj
    raise ProposalParseError("no JSON object found in response")


def parse_proposal(text: str) -> ResearchProposal:
    """Parse a model reply into a validated seven-key proposal."""
    if not text.strip():
        raise ProposalParseError("empty response")
    raw = extract_json_object(text)
    fields: dict[str, str] = {}
    extras: dict[str, str] = {}
    for key, value in raw.items():
        canon = canonical_key(str(key))
        value_text = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
        if canon and canon not in fields:
            fields[canon] = value_text
        else:
            extras[str(key)] = value_text
    return ResearchProposal(fields=fields, extras=extras)


def render_proposal(proposal: ResearchProposal) -> str:
    """Canonical JSON form; parse_proposal round-trips it exactly."""
    return json.dumps(proposal.fields, indent=2, ensure_ascii=False)


def render_proposal_markdown(proposal: ResearchProposal) -> str:
    """Bolded per-key headings in canonical order, for the assembled document."""
    blocks = [f"**{key}:** {proposal.fields[key]}" for key in PROPOSAL_KEYS]
    return "\n\n".join(blocks)


def build_field_expansion_prompt(field_name: str, content: str) -> str:
    """Per-aspect expansion prompt; exactly one proposal field's content."""
    if field_name not in PROPOSAL_KEYS:
        raise ArgumentError(f"unknown proposal field {field_name!r}")
    if not content.strip():
        raise ArgumentError("content must be non-empty")
    return prompts.render("task_expand_aspect", field=field_name, content=content)


def build_critique_prompt(draft: str) -> str:
    if not draft.strip():
        raise ArgumentError("draft must be non-empty")
    return prompts.render("task_critical_review", draft=draft)


def build_modeling_prompt(draft: str) -> str:
    if not draft.strip():
        raise ArgumentError("draft must be non-empty")
    return prompts.render("task_modeling_priorities", draft=draft)


def build_synbio_prompt(draft: str) -> str:
    if not draft.strip():
        raise ArgumentError("draft must be non-empty")
    return prompts.render("task_synbio_priorities", draft=draft)
