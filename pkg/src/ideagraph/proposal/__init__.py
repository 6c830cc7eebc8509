from .document import (
    CSV_COLUMNS,
    ResearchDocument,
    assemble_document,
    document_slug,
    export_document,
)
from .schema import (
    PROPOSAL_KEYS,
    ResearchProposal,
    build_critique_prompt,
    build_field_expansion_prompt,
    build_modeling_prompt,
    build_synbio_prompt,
    parse_proposal,
    render_proposal,
    render_proposal_markdown,
)

__all__ = [
    "CSV_COLUMNS",
    "PROPOSAL_KEYS",
    "ResearchDocument",
    "ResearchProposal",
    "assemble_document",
    "build_critique_prompt",
    "build_field_expansion_prompt",
    "build_modeling_prompt",
    "build_synbio_prompt",
    "document_slug",
    "export_document",
    "parse_proposal",
    "render_proposal",
    "render_proposal_markdown",
]
