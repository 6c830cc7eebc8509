"""Research-document assembly and export.

The assembled Markdown follows a fixed skeleton: title line, knowledge
graph, expanded graph, proposed research, expanded descriptions, critical
review, modeling priorities, synthetic-biology priorities, and (when a
literature assessment ran) novelty and feasibility. Exports write the
Markdown, a one-row RFC-4180 CSV, and the full document as JSON, all named
by a slug of the two endpoint concepts.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import AssemblyError
from ..novelty.types import NoveltyReport, PaperRecord
from .schema import PROPOSAL_KEYS, ResearchProposal, render_proposal_markdown

TITLE_TEMPLATE = "# Research concept between {start_node} and {end_node}"
HEADER_KNOWLEDGE_GRAPH = "### KNOWLEDGE GRAPH:"
HEADER_EXPANDED_GRAPH = "### EXPANDED GRAPH:"
HEADER_PROPOSED_RESEARCH = "### PROPOSED RESEARCH:"
HEADER_EXPANDED_DESCRIPTIONS = "### EXPANDED DESCRIPTIONS:"
HEADER_CRITIQUE = "### SUMMARY, CRITICAL REVIEW, AND IMPROVEMENTS"
HEADER_MODELING = "### MODELING AND SIMULATION PRIORITIES"
HEADER_SYNBIO = "### SYNTHETIC BIOLOGY EXPERIMENTAL PRIORITIES"
HEADER_NOVELTY = "### NOVELTY AND FEASIBILITY"

SECTION_HEADERS = (
    HEADER_KNOWLEDGE_GRAPH,
    HEADER_EXPANDED_GRAPH,
    HEADER_PROPOSED_RESEARCH,
    HEADER_EXPANDED_DESCRIPTIONS,
    HEADER_CRITIQUE,
    HEADER_MODELING,
    HEADER_SYNBIO,
    HEADER_NOVELTY,
)

CSV_COLUMNS = (
    "start_node",
    "end_node",
    "path_string",
    *PROPOSAL_KEYS,
    "critique",
    "modeling_priorities",
    "synbio_priorities",
    "novelty_score",
    "feasibility_score",
)


@dataclass
class ResearchDocument:
    start_node: str
    end_node: str
    path_string: str
    expanded_graph: str
    proposal: ResearchProposal
    expansions: dict[str, str] = field(default_factory=dict)
    critique: str = ""
    modeling_priorities: str = ""
    synbio_priorities: str = ""
    novelty_report: Optional[NoveltyReport] = None

    def __post_init__(self):
        stray = set(self.expansions) - set(PROPOSAL_KEYS)
        if stray:
            raise AssemblyError(f"expansions for unknown proposal keys: {sorted(stray)}")

    def to_dict(self) -> dict:
        return {
            "start_node": self.start_node,
            "end_node": self.end_node,
            "path_string": self.path_string,
            "expanded_graph": self.expanded_graph,
            "proposal": {"fields": dict(self.proposal.fields), "extras": dict(self.proposal.extras)},
            "expansions": dict(self.expansions),
            "critique": self.critique,
            "modeling_priorities": self.modeling_priorities,
            "synbio_priorities": self.synbio_priorities,
            "novelty_report": self.novelty_report.to_dict() if self.novelty_report else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResearchDocument":
        report = None
        if data.get("novelty_report"):
            nr = data["novelty_report"]
            report = NoveltyReport(
                queries=list(nr.get("queries", [])),
                hits={
                    q: [PaperRecord(**r) for r in records]
                    for q, records in nr.get("hits", {}).items()
                },
                novelty=nr["novelty"],
                feasibility=nr["feasibility"],
                rationale=nr.get("rationale", ""),
            )
        return cls(
            start_node=data["start_node"],
            end_node=data["end_node"],
            path_string=data["path_string"],
            expanded_graph=data["expanded_graph"],
            proposal=ResearchProposal(
                fields=dict(data["proposal"]["fields"]),
                extras=dict(data["proposal"].get("extras", {})),
            ),
            expansions=dict(data.get("expansions", {})),
            critique=data.get("critique", ""),
            modeling_priorities=data.get("modeling_priorities", ""),
            synbio_priorities=data.get("synbio_priorities", ""),
            novelty_report=report,
        )


def _require(value: str, name: str) -> str:
    if value is None or not str(value).strip():
        raise AssemblyError(f"mandatory document part {name!r} is missing")
    return str(value)


def assemble_document(doc: ResearchDocument) -> str:
    """Render the full Markdown document in the fixed section order."""
    title = TITLE_TEMPLATE.format(
        start_node=_require(doc.start_node, "start_node"),
        end_node=_require(doc.end_node, "end_node"),
    )
    if doc.proposal is None:
        raise AssemblyError("mandatory document part 'proposal' is missing")
    expansion_blocks = [doc.expansions[k] for k in PROPOSAL_KEYS if k in doc.expansions]
    if not expansion_blocks:
        raise AssemblyError("mandatory document part 'expansions' is missing")

    parts = [
        title,
        HEADER_KNOWLEDGE_GRAPH,
        _require(doc.path_string, "path_string"),
        "",
        HEADER_EXPANDED_GRAPH,
        _require(doc.expanded_graph, "expanded_graph"),
        "",
        HEADER_PROPOSED_RESEARCH,
        render_proposal_markdown(doc.proposal),
        "",
        HEADER_EXPANDED_DESCRIPTIONS,
        "\n\n".join(expansion_blocks),
        "",
        HEADER_CRITIQUE,
        _require(doc.critique, "critique"),
        "",
        HEADER_MODELING,
        _require(doc.modeling_priorities, "modeling_priorities"),
        "",
        HEADER_SYNBIO,
        _require(doc.synbio_priorities, "synbio_priorities"),
    ]
    if doc.novelty_report is not None:
        parts.extend(["", HEADER_NOVELTY, doc.novelty_report.summary_text()])
    return "\n".join(parts) + "\n"


def assemble_draft(
    start_node: str,
    end_node: str,
    path_string: str,
    expanded_graph: str,
    proposal: ResearchProposal,
    expansions: dict[str, str],
) -> str:
    """First five sections only: the draft handed to review/priority steps."""
    expansion_blocks = [expansions[k] for k in PROPOSAL_KEYS if k in expansions]
    parts = [
        TITLE_TEMPLATE.format(
            start_node=_require(start_node, "start_node"),
            end_node=_require(end_node, "end_node"),
        ),
        HEADER_KNOWLEDGE_GRAPH,
        _require(path_string, "path_string"),
        "",
        HEADER_EXPANDED_GRAPH,
        _require(expanded_graph, "expanded_graph"),
        "",
        HEADER_PROPOSED_RESEARCH,
        render_proposal_markdown(proposal),
        "",
        HEADER_EXPANDED_DESCRIPTIONS,
        "\n\n".join(expansion_blocks) if expansion_blocks else "(pending)",
    ]
    return "\n".join(parts)


def document_slug(start_node: str, end_node: str) -> str:
    """Filesystem-safe lowercased hyphen-joined endpoint labels."""

    def clean(label: str) -> str:
        slug = re.sub(r"[^a-z0-9]+", "-", label.lower()).strip("-")
        return slug or "concept"

    return f"{clean(start_node)}-{clean(end_node)}"


def export_document(doc: ResearchDocument, directory: Path) -> dict[str, Path]:
    """Write {slug}.md, {slug}.csv and {slug}.json; overwrite on re-export."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    slug = document_slug(doc.start_node, doc.end_node)
    markdown = assemble_document(doc)

    md_path = directory / f"{slug}.md"
    csv_path = directory / f"{slug}.csv"
    json_path = directory / f"{slug}.json"
    try:
        md_path.write_text(markdown, encoding="utf-8")

        row = {
            "start_node": doc.start_node,
            "end_node": doc.end_node,
            "path_string": doc.path_string,
            **{key: doc.proposal.fields[key] for key in PROPOSAL_KEYS},
            "critique": doc.critique,
            "modeling_priorities": doc.modeling_priorities,
            "synbio_priorities": doc.synbio_priorities,
            "novelty_score": doc.novelty_report.novelty if doc.novelty_report else "",
            "feasibility_score": doc.novelty_report.feasibility if doc.novelty_report else "",
        }
        with csv_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
            writer.writeheader()
            writer.writerow(row)

        json_path.write_text(
            json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise AssemblyError(f"failed writing export under {directory}: {exc}") from exc
    return {"md": md_path, "csv": csv_path, "json": json_path}
