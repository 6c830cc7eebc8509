import json

import numpy as np
import pytest

from ideagraph import prompts
from ideagraph.errors import PipelineError
from ideagraph.llm.backends import (
    LlmGateway,
    ReplayBackend,
    ScriptedBackend,
    ScriptedEmbeddingBackend,
)
from ideagraph.llm.trace import TraceLog
from ideagraph.novelty.scholar import StaticSearchBackend
from ideagraph.novelty.types import PaperRecord
from ideagraph.agents.scripted import ScriptedPipelineConfig, run_scripted_pipeline
from ideagraph.pathing.types import PathConfig
from ideagraph.proposal.document import assemble_draft
from ideagraph.proposal.schema import PROPOSAL_KEYS

from test_novelty import SCORE_REPLY

PROPOSAL_JSON = json.dumps(
    {key: f"CONTENT_{key.upper()}" for key in PROPOSAL_KEYS}, indent=2
)

CANNED = (
    ["DEFINITIONS_TEXT", PROPOSAL_JSON]
    + [f"EXPANSION_{key.upper()}" for key in PROPOSAL_KEYS]
    + ["CRITIQUE_TEXT", "MODELING_TEXT", "SYNBIO_TEXT"]
)


def pipeline_gateway(tiny5, responses=None):
    labels = [n.label for n in tiny5.nodes.values()]
    dim = len(labels)
    embed = ScriptedEmbeddingBackend(
        {label: np.eye(dim)[i] for i, label in enumerate(labels)}, model_tag="orthonormal-test"
    )
    chat = ScriptedBackend(list(responses if responses is not None else CANNED))
    return LlmGateway(chat=chat, embeddings=embed), chat


def run(tiny5, tiny5_embeddings, responses=None, **kwargs):
    store, _, _ = tiny5_embeddings
    gateway, chat = pipeline_gateway(tiny5, responses)
    cfg = kwargs.pop("cfg", ScriptedPipelineConfig(path=PathConfig(alpha=0.0, seed=1)))
    result = run_scripted_pipeline(
        tiny5, store, gateway,
        keyword_1="silk", keyword_2="energy-intensive", cfg=cfg, **kwargs,
    )
    return result, chat


class TestScriptedPipeline:
    def test_twelve_backend_calls(self, tiny5, tiny5_embeddings):
        _, chat = run(tiny5, tiny5_embeddings)
        assert len(chat.requests) == 12
        assert chat.queue == []

    def test_document_parts(self, tiny5, tiny5_embeddings):
        result, _ = run(tiny5, tiny5_embeddings)
        doc = result.document
        assert doc.start_node == "silk"
        assert doc.end_node == "energy-intensive"
        assert doc.expanded_graph == "DEFINITIONS_TEXT"
        assert doc.proposal.fields["hypothesis"] == "CONTENT_HYPOTHESIS"
        assert list(doc.expansions) == list(PROPOSAL_KEYS)
        assert doc.critique == "CRITIQUE_TEXT"
        assert doc.modeling_priorities == "MODELING_TEXT"
        assert doc.synbio_priorities == "SYNBIO_TEXT"

    def test_title_line(self, tiny5, tiny5_embeddings):
        result, _ = run(tiny5, tiny5_embeddings)
        first_line = result.markdown.splitlines()[0]
        assert first_line == "# Research concept between silk and energy-intensive"

    def test_byte_identical_across_runs(self, tiny5, tiny5_embeddings):
        first, _ = run(tiny5, tiny5_embeddings)
        second, _ = run(tiny5, tiny5_embeddings)
        assert first.markdown == second.markdown

    def test_expansion_prompts_isolated(self, tiny5, tiny5_embeddings):
        _, chat = run(tiny5, tiny5_embeddings)
        expansion_requests = chat.requests[2:9]
        for key, request in zip(PROPOSAL_KEYS, expansion_requests):
            user = request.messages[-1].content
            assert f"CONTENT_{key.upper()}" in user
            for other in PROPOSAL_KEYS:
                if other != key:
                    assert f"CONTENT_{other.upper()}" not in user

    def test_prompt_fidelity_against_catalog(self, tiny5, tiny5_embeddings):
        result, chat = run(tiny5, tiny5_embeddings)
        path_string = result.sample.path_string
        proposal = result.document.proposal

        expected_draft = assemble_draft(
            "silk", "energy-intensive", path_string, "DEFINITIONS_TEXT",
            proposal, result.document.expansions,
        )
        expected = [
            (prompts.load("ontologist"),
             prompts.render("task_define_concepts", path_string=path_string)),
            (prompts.load("scientist_proposer"),
             prompts.render("task_propose", path_string=path_string, definitions="DEFINITIONS_TEXT")),
        ]
        for key in PROPOSAL_KEYS:
            expected.append(
                (prompts.load("scientist_expander"),
                 prompts.render("task_expand_aspect", field=key, content=proposal.fields[key]))
            )
        expected.extend(
            [
                (prompts.load("critic"), prompts.render("task_critical_review", draft=expected_draft)),
                (prompts.load("critic"), prompts.render("task_modeling_priorities", draft=expected_draft)),
                (prompts.load("critic"), prompts.render("task_synbio_priorities", draft=expected_draft)),
            ]
        )
        assert len(chat.requests) == len(expected)
        for request, (system, user) in zip(chat.requests, expected):
            assert request.messages[0].role == "system"
            assert request.messages[0].content == system
            assert request.messages[-1].role == "user"
            assert request.messages[-1].content == user

    def test_random_partner_when_keyword_missing(self, tiny5, tiny5_embeddings):
        store, _, _ = tiny5_embeddings
        gateway1, _ = pipeline_gateway(tiny5)
        gateway2, _ = pipeline_gateway(tiny5)
        cfg = ScriptedPipelineConfig(path=PathConfig(alpha=0.0, seed=42))
        first = run_scripted_pipeline(tiny5, store, gateway1, keyword_1="silk", cfg=cfg)
        second = run_scripted_pipeline(tiny5, store, gateway2, keyword_1="silk", cfg=cfg)
        assert first.document.start_node == "silk"
        assert first.document.end_node == second.document.end_node
        assert first.markdown == second.markdown

    def test_both_keywords_missing_uses_seeded_pair(self, tiny5, tiny5_embeddings):
        store, _, _ = tiny5_embeddings
        gateway, _ = pipeline_gateway(tiny5)
        cfg = ScriptedPipelineConfig(path=PathConfig(alpha=0.0, seed=7))
        result = run_scripted_pipeline(tiny5, store, gateway, cfg=cfg)
        assert result.document.start_node != result.document.end_node

    def test_unparsable_proposal_repaired_once(self, tiny5, tiny5_embeddings):
        responses = list(CANNED)
        responses[1] = "no json here at all"
        responses.insert(2, PROPOSAL_JSON)  # the repair re-ask answer
        result, chat = run(tiny5, tiny5_embeddings, responses=responses)
        assert result.document.proposal.fields["novelty"] == "CONTENT_NOVELTY"
        assert len(chat.requests) == 13
        repair_request = chat.requests[2]
        assert "JSON" in repair_request.messages[-1].content

    def test_unparsable_proposal_twice_fails_with_raw(self, tiny5, tiny5_embeddings):
        responses = ["DEFINITIONS_TEXT", "garbage one", "garbage two"]
        with pytest.raises(PipelineError) as err:
            run(tiny5, tiny5_embeddings, responses=responses)
        assert err.value.step == "proposal"
        assert err.value.raw == "garbage one"

    def test_backend_failure_names_step(self, tiny5, tiny5_embeddings):
        with pytest.raises(PipelineError) as err:
            run(tiny5, tiny5_embeddings, responses=["DEFINITIONS_TEXT"])
        assert err.value.step == "proposal"

    def test_novelty_hook_appends_section(self, tiny5, tiny5_embeddings):
        from ideagraph.novelty.assess import assess_novelty

        scorer = LlmGateway(chat=ScriptedBackend([SCORE_REPLY]))
        search = StaticSearchBackend([PaperRecord(title="T")])
        result, chat = run(
            tiny5, tiny5_embeddings,
            novelty=lambda prop: assess_novelty(prop, scorer, search),
        )
        assert len(chat.requests) == 12  # primary backend untouched by the scorer
        assert result.document.novelty_report.novelty == 8
        assert "### NOVELTY AND FEASIBILITY" in result.markdown

    def test_trace_replay_reproduces_markdown(self, tiny5, tiny5_embeddings, tmp_path):
        store, _, _ = tiny5_embeddings
        labels = [n.label for n in tiny5.nodes.values()]
        dim = len(labels)

        def embed_backend():
            return ScriptedEmbeddingBackend(
                {label: np.eye(dim)[i] for i, label in enumerate(labels)}, model_tag="t"
            )

        trace = TraceLog(tmp_path / "trace.jsonl")
        live = LlmGateway(chat=ScriptedBackend(list(CANNED)), embeddings=embed_backend(), trace=trace)
        cfg = ScriptedPipelineConfig(path=PathConfig(alpha=0.0, seed=1))
        first = run_scripted_pipeline(
            tiny5, store, live, keyword_1="silk", keyword_2="energy-intensive", cfg=cfg
        )
        replay = LlmGateway(
            chat=ReplayBackend(TraceLog.load(tmp_path / "trace.jsonl")),
            embeddings=embed_backend(),
        )
        second = run_scripted_pipeline(
            tiny5, store, replay, keyword_1="silk", keyword_2="energy-intensive", cfg=cfg
        )
        assert first.markdown == second.markdown
