"""Pre-programmed pipeline: a fixed 8-step schedule over specialized agents.

Steps: (1) path sampling, (2) concept definitions, (3) seven-key proposal,
(4) seven per-field expansions, (5) critical review, (6) modeling
priorities, (7) synthetic-biology priorities, (8) assembly. Each step's
prompt carries only that step's designated inputs (the path string for 2,
path string plus definitions for 3, one field's content per expansion, the
assembled draft for 5-7). Twelve backend calls total when every reply
parses on the first attempt.

An optional novelty hook (a callable taking the proposal and returning a
NoveltyReport) appends the literature assessment as a ninth document
section; it runs against its own gateway and search client, leaving the
twelve-call schedule of the primary backend untouched.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .. import prompts
from ..errors import PipelineError, ProposalParseError, ProposalSchemaError
from ..graph.embeddings import EmbeddingStore, nearest_node
from ..graph.model import KnowledgeGraph
from ..graph.sampling import random_node_pair
from ..llm.backends import LlmGateway
from ..llm.types import ChatMessage, ChatRequest
from ..novelty.types import NoveltyReport
from ..pathing.search import sample
from ..pathing.types import PathConfig, PathSample
from ..proposal.document import ResearchDocument, assemble_document, assemble_draft
from ..proposal.schema import (
    PROPOSAL_KEYS,
    ResearchProposal,
    build_critique_prompt,
    build_field_expansion_prompt,
    build_modeling_prompt,
    build_synbio_prompt,
    parse_proposal,
)

logger = logging.getLogger(__name__)

REPAIR_PROMPT = (
    "Your previous reply could not be parsed. Reply again with exactly one JSON "
    "object containing the seven required keys: hypothesis, outcome, mechanisms, "
    "design_principles, unexpected_properties, comparison, novelty."
)


@dataclass
class PipelineResult:
    document: ResearchDocument
    sample: PathSample
    markdown: str = ""


@dataclass
class ScriptedPipelineConfig:
    path: PathConfig = field(default_factory=PathConfig)
    temperature: float = 0.7
    max_output_tokens: int = 4096
    parallel_expansions: bool = False  # keep False with single-consumer backends


def run_scripted_pipeline(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    gateway: LlmGateway,
    keyword_1: Optional[str] = None,
    keyword_2: Optional[str] = None,
    cfg: Optional[ScriptedPipelineConfig] = None,
    novelty: Optional[Callable[[ResearchProposal], NoveltyReport]] = None,
    on_step: Optional[Callable[[str, str, str], None]] = None,
) -> PipelineResult:
    """Run the fixed schedule and return the assembled document.

    on_step(step, author, content) fires after each completed step so a
    session can stream progress.
    """
    cfg = cfg or ScriptedPipelineConfig()
    source, target = _resolve_endpoints(g, store, gateway, keyword_1, keyword_2, cfg.path.seed)

    def notify(step: str, author: str, content: str):
        if on_step:
            on_step(step, author, content)

    # step 1: path sampling
    path_sample = sample(g, store, source, target, cfg.path)
    start_label, end_label = path_sample.labels[0], path_sample.labels[-1]
    notify("path", "assistant", path_sample.path_string)

    def ask(step: str, system: str, user: str) -> str:
        try:
            response = gateway.complete(
                ChatRequest(
                    messages=[
                        ChatMessage(role="system", content=system),
                        ChatMessage(role="user", content=user),
                    ],
                    temperature=cfg.temperature,
                    max_output_tokens=cfg.max_output_tokens,
                )
            )
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(step, str(exc)) from exc
        return response.content

    # step 2: concept definitions
    expanded_graph = ask(
        "definitions",
        prompts.load("ontologist"),
        prompts.render("task_define_concepts", path_string=path_sample.path_string),
    )
    notify("definitions", "ontologist", expanded_graph)

    # step 3: seven-key proposal (one repair re-ask on parse failure)
    propose_user = prompts.render(
        "task_propose", path_string=path_sample.path_string, definitions=expanded_graph
    )
    raw_proposal = ask("proposal", prompts.load("scientist_proposer"), propose_user)
    try:
        proposal = parse_proposal(raw_proposal)
    except (ProposalParseError, ProposalSchemaError) as first_error:
        logger.warning("proposal parse failed (%s); re-asking once", first_error)
        try:
            retry = gateway.complete(
                ChatRequest(
                    messages=[
                        ChatMessage(role="system", content=prompts.load("scientist_proposer")),
                        ChatMessage(role="user", content=propose_user),
                        ChatMessage(role="assistant", content=raw_proposal),
                        ChatMessage(role="user", content=REPAIR_PROMPT),
                    ],
                    temperature=cfg.temperature,
                    max_output_tokens=cfg.max_output_tokens,
                )
            )
            proposal = parse_proposal(retry.content)
        except (ProposalParseError, ProposalSchemaError) as exc:
            raise PipelineError("proposal", f"unparsable proposal JSON: {exc}", raw=raw_proposal) from exc
    notify("proposal", "scientist_1", raw_proposal)

    # step 4: per-field expansions, merged in canonical key order
    expander_system = prompts.load("scientist_expander")

    def expand(field_name: str) -> str:
        return ask(
            f"expand:{field_name}",
            expander_system,
            build_field_expansion_prompt(field_name, proposal.fields[field_name]),
        )

    if cfg.parallel_expansions:
        with ThreadPoolExecutor(max_workers=len(PROPOSAL_KEYS)) as pool:
            results = list(pool.map(expand, PROPOSAL_KEYS))
        expansions = dict(zip(PROPOSAL_KEYS, results))
    else:
        expansions = {key: expand(key) for key in PROPOSAL_KEYS}
    for key in PROPOSAL_KEYS:
        notify(f"expand:{key}", "scientist_2", expansions[key])

    # steps 5-7: review and priorities over the assembled draft
    draft = assemble_draft(
        start_label, end_label, path_sample.path_string, expanded_graph, proposal, expansions
    )
    critic_system = prompts.load("critic")
    critique = ask("critique", critic_system, build_critique_prompt(draft))
    notify("critique", "critic", critique)
    modeling = ask("modeling_priorities", critic_system, build_modeling_prompt(draft))
    notify("modeling_priorities", "critic", modeling)
    synbio = ask("synbio_priorities", critic_system, build_synbio_prompt(draft))
    notify("synbio_priorities", "critic", synbio)

    report = None
    if novelty is not None:
        try:
            report = novelty(proposal)
        except Exception as exc:
            raise PipelineError("novelty", str(exc)) from exc
        notify("novelty", "assistant", report.summary_text())

    # step 8: assembly
    document = ResearchDocument(
        start_node=start_label,
        end_node=end_label,
        path_string=path_sample.path_string,
        expanded_graph=expanded_graph,
        proposal=proposal,
        expansions=expansions,
        critique=critique,
        modeling_priorities=modeling,
        synbio_priorities=synbio,
        novelty_report=report,
    )
    return PipelineResult(document=document, sample=path_sample, markdown=assemble_document(document))


def _resolve_endpoints(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    gateway: LlmGateway,
    keyword_1: Optional[str],
    keyword_2: Optional[str],
    seed: int,
) -> tuple[str, str]:
    """Match given keywords to nodes; fill missing ones from a seeded draw."""
    if keyword_1 and keyword_2:
        source, _ = nearest_node(g, store, keyword_1, gateway)
        target, _ = nearest_node(g, store, keyword_2, gateway)
        return source, target
    pair = random_node_pair(g, seed)
    if not keyword_1 and not keyword_2:
        return pair
    given = keyword_1 or keyword_2
    anchor, _ = nearest_node(g, store, given, gateway)
    partner = pair[0] if pair[0] != anchor else pair[1]
    return (anchor, partner) if keyword_1 else (partner, anchor)
