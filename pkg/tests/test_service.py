import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from ideagraph.errors import ConfigError, SessionNotFoundError, SessionStateError
from ideagraph.llm.backends import LlmGateway, ScriptedBackend, ScriptedEmbeddingBackend
from ideagraph.llm.types import ChatResponse, ToolCall
from ideagraph.novelty.scholar import StaticSearchBackend
from ideagraph.novelty.types import PaperRecord
from ideagraph.service.api import create_app
from ideagraph.service.events import EventLog
from ideagraph.service.sessions import BackendBundle, SessionManager, SessionRequest

from test_orchestrator_scripted import CANNED, PROPOSAL_JSON


def embed_backend(tiny5):
    labels = [n.label for n in tiny5.nodes.values()]
    dim = len(labels)
    return ScriptedEmbeddingBackend(
        {label: np.eye(dim)[i] for i, label in enumerate(labels)}, model_tag="orthonormal-test"
    )


def scripted_bundle(tiny5, responses=None):
    return BackendBundle(
        make_gateway=lambda: LlmGateway(
            chat=ScriptedBackend(list(responses if responses is not None else CANNED)),
            embeddings=embed_backend(tiny5),
        ),
        make_search=lambda: StaticSearchBackend([PaperRecord(title="T")]),
    )


GROUP_AGENTS = [
    "Plan: path, define, propose, expand, critique.",
    ChatResponse(
        tool_calls=[
            ToolCall(
                name="generate_path",
                arguments={"keyword_1": "silk", "keyword_2": "energy-intensive"},
                call_id="tc1",
            )
        ],
        finish_reason="tool_call",
    ),
    "Definitions of the path concepts.",
    PROPOSAL_JSON,
    "### Expanded hypothesis\nDetails.",
    "Review with molecular modeling question.\n\nsynthetic biology question.",
    "Wrapping up. TERMINATE",
]
GROUP_MANAGER = [
    "planner", "assistant", "ontologist", "scientist_1", "scientist_2", "critic", "assistant",
]


def group_bundle(tiny5):
    return BackendBundle(
        make_gateway=lambda: LlmGateway(
            chat=ScriptedBackend(list(GROUP_AGENTS)), embeddings=embed_backend(tiny5)
        ),
        make_manager_gateway=lambda: LlmGateway(chat=ScriptedBackend(list(GROUP_MANAGER))),
        make_search=lambda: StaticSearchBackend([PaperRecord(title="T")]),
    )


def manager_for(tiny5, tiny5_embeddings, tmp_path, bundle=None):
    store, _, _ = tiny5_embeddings
    return SessionManager(
        tiny5, store, bundle or scripted_bundle(tiny5), data_dir=tmp_path / "data"
    )


def scripted_request(**kw):
    kw.setdefault("mode", "scripted")
    kw.setdefault("keyword_1", "silk")
    kw.setdefault("keyword_2", "energy-intensive")
    kw.setdefault("alpha", 0.0)
    return SessionRequest(**kw)


class TestSessionLifecycle:
    def test_scripted_session_finishes_with_document(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        session_id = manager.create_session(scripted_request())
        session = manager.wait(session_id)
        assert session.status == "finished"
        assert session.document is not None
        for kind in ("md", "csv", "json", "png"):
            assert kind in session.export_paths

    def test_invalid_alpha_names_field(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        with pytest.raises(ConfigError) as err:
            manager.create_session(scripted_request(alpha=-1.0))
        assert err.value.field == "alpha"

    def test_same_seed_byte_identical_documents(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        first = manager.wait(manager.create_session(scripted_request(seed=5)))
        second = manager.wait(manager.create_session(scripted_request(seed=5)))
        assert (
            manager.document_markdown(first.id) == manager.document_markdown(second.id)
        )
        from pathlib import Path

        path1 = manager.get(first.id).export_paths["md"]
        path2 = manager.get(second.id).export_paths["md"]
        assert Path(path1).read_bytes() == Path(path2).read_bytes()

    def test_failed_backend_marks_failed(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(
            tiny5, tiny5_embeddings, tmp_path, bundle=scripted_bundle(tiny5, responses=["only one"])
        )
        session = manager.wait(manager.create_session(scripted_request()))
        assert session.status == "failed"
        assert session.error

    def test_unknown_session(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        with pytest.raises(SessionNotFoundError):
            manager.get("nope")

    def test_group_chat_session(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path, bundle=group_bundle(tiny5))
        session = manager.wait(
            manager.create_session(
                SessionRequest(mode="group_chat", keyword_1="silk", keyword_2="energy-intensive",
                               alpha=0.0, max_turns=10)
            )
        )
        assert session.status == "finished"
        session.transcript.check_invariants()
        assert session.transcript.terminated
        assert session.document is not None


class TestHumanMessages:
    def test_rejected_for_scripted(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        session_id = manager.create_session(scripted_request())
        manager.wait(session_id)
        with pytest.raises(SessionStateError):
            manager.post_human_message(session_id, "hello")

    def test_rejected_when_finished(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path, bundle=group_bundle(tiny5))
        session_id = manager.create_session(
            SessionRequest(mode="group_chat", alpha=0.0, keyword_1="silk",
                           keyword_2="energy-intensive", max_turns=10)
        )
        manager.wait(session_id)
        with pytest.raises(SessionStateError):
            manager.post_human_message(session_id, "too late")

    def test_fifo_injection(self, tiny5, tiny5_embeddings, tmp_path):
        slow_agents = ["first reply", "second reply. TERMINATE"]
        bundle = BackendBundle(
            make_gateway=lambda: LlmGateway(
                chat=ScriptedBackend(list(slow_agents)), embeddings=embed_backend(tiny5)
            ),
            make_manager_gateway=lambda: LlmGateway(
                chat=ScriptedBackend(["planner", "critic"])
            ),
        )
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path, bundle=bundle)
        # run synchronously with messages queued up-front: order must persist
        request = SessionRequest(mode="group_chat", alpha=0.0, keyword_1="silk",
                                 keyword_2="energy-intensive", max_turns=5)
        request.validate()
        import uuid

        from ideagraph.service.sessions import Session

        session = Session(uuid.uuid4().hex[:12], request, manager.data_dir)
        manager.sessions[session.id] = session
        session.human_queue.put("guidance one")
        session.human_queue.put("guidance two")
        manager._run_group_chat(session)
        interventions = [
            e.content for e in session.transcript if e.kind == "human_intervention"
        ]
        assert interventions == ["guidance one", "guidance two"]
        seqs = [e.seq for e in session.transcript if e.kind == "human_intervention"]
        assert seqs == sorted(seqs)


class TestEventLog:
    def test_append_assigns_sequence(self, tmp_path):
        log = EventLog(tmp_path / "e.jsonl")
        a = log.append("status", {"status": "running"})
        b = log.append("entry", {"seq": 0})
        assert (a["seq"], b["seq"]) == (0, 1)

    def test_read_from_offset(self, tmp_path):
        log = EventLog(tmp_path / "e.jsonl")
        for i in range(5):
            log.append("entry", {"i": i})
        assert [e["seq"] for e in log.read_from(3)] == [3, 4]
        assert log.read_from(99) == []

    def test_reopen_continues_sequence(self, tmp_path):
        path = tmp_path / "e.jsonl"
        EventLog(path).append("entry", {"i": 0})
        log2 = EventLog(path)
        event = log2.append("entry", {"i": 1})
        assert event["seq"] == 1

    def test_follow_stops_at_terminal(self, tmp_path):
        log = EventLog(tmp_path / "e.jsonl")
        log.append("entry", {"i": 0})
        log.append("status", {"status": "finished"})
        events = list(log.follow(0, stop=lambda: True))
        assert len(events) == 2


class TestCrashRecovery:
    def test_replay_reconstructs_transcript(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path, bundle=group_bundle(tiny5))
        session = manager.wait(
            manager.create_session(
                SessionRequest(mode="group_chat", alpha=0.0, keyword_1="silk",
                               keyword_2="energy-intensive", max_turns=10)
            )
        )
        original = [(e.seq, e.author, e.kind, e.content) for e in session.transcript]

        # simulated crash: a fresh manager over the same data directory
        store, _, _ = tiny5_embeddings
        reborn = SessionManager(tiny5, store, group_bundle(tiny5), data_dir=tmp_path / "data")
        recovered_ids = reborn.recover()
        assert session.id in recovered_ids
        replayed = reborn.replay_transcript(session.id)
        replayed.check_invariants()
        assert [(e.seq, e.author, e.kind, e.content) for e in replayed] == original
        assert reborn.get(session.id).status == "finished"

    def test_interrupted_running_session_marked_failed(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        data_dir = manager.data_dir
        # forge a session that was still running at crash time
        log = EventLog(data_dir / "deadbeef.events.jsonl")
        log.append("status", {"status": "running"})
        log.append("entry", {"seq": 0, "author": "human", "kind": "message",
                             "content": "task", "timestamp": 0.0})
        (data_dir / "deadbeef.meta.json").write_text(
            json.dumps({"id": "deadbeef", "mode": "group_chat", "status": "running",
                        "config": {"mode": "group_chat"}})
        )
        store, _, _ = tiny5_embeddings
        reborn = SessionManager(tiny5, store, scripted_bundle(tiny5), data_dir=data_dir)
        reborn.recover()
        recovered = reborn.get("deadbeef")
        assert recovered.status == "failed"
        assert len(recovered.transcript) == 1


class TestHttpApi:
    @pytest.fixture
    def client(self, tiny5, tiny5_embeddings, tmp_path):
        manager = manager_for(tiny5, tiny5_embeddings, tmp_path)
        app = create_app(manager, gateway_for_queries=LlmGateway(embeddings=embed_backend(tiny5)))
        return TestClient(app), manager

    def test_create_and_get(self, client):
        http, manager = client
        response = http.post("/sessions", json={"mode": "scripted", "keyword_1": "silk",
                                                "keyword_2": "energy-intensive", "alpha": 0.0})
        assert response.status_code == 200
        session_id = response.json()["id"]
        manager.wait(session_id)
        info = http.get(f"/sessions/{session_id}").json()
        assert info["status"] == "finished"
        assert info["document_ready"] is True

    def test_validation_error_422(self, client):
        http, _ = client
        response = http.post("/sessions", json={"mode": "scripted", "alpha": -1})
        assert response.status_code == 422
        assert "alpha" in response.json()["detail"]

    def test_unknown_session_404(self, client):
        http, _ = client
        assert http.get("/sessions/nope").status_code == 404

    def test_event_stream_replay(self, client):
        http, manager = client
        session_id = http.post(
            "/sessions",
            json={"mode": "scripted", "keyword_1": "silk", "keyword_2": "energy-intensive",
                  "alpha": 0.0},
        ).json()["id"]
        manager.wait(session_id)
        events = []
        with http.stream("GET", f"/sessions/{session_id}/events?from=0") as response:
            assert response.status_code == 200
            for line in response.iter_lines():
                if line.startswith("data: "):
                    events.append(json.loads(line[len("data: "):]))
        assert events  # ends with the synthetic end event payload {}
        payloads = [e for e in events if "seq" in e]
        seqs = [e["seq"] for e in payloads]
        assert seqs == list(range(len(seqs)))
        kinds = {e["type"] for e in payloads}
        assert kinds == {"entry", "status"}
        statuses = [e["payload"]["status"] for e in payloads if e["type"] == "status"]
        assert statuses[-1] == "finished"

    def test_event_stream_from_beyond_tail(self, client):
        http, manager = client
        session_id = http.post(
            "/sessions",
            json={"mode": "scripted", "keyword_1": "silk", "keyword_2": "energy-intensive",
                  "alpha": 0.0},
        ).json()["id"]
        manager.wait(session_id)
        with http.stream("GET", f"/sessions/{session_id}/events?from=9999") as response:
            lines = [l for l in response.iter_lines() if l.startswith("data: ")]
        assert len(lines) == 1  # only the end marker

    def test_documents_served(self, client):
        http, manager = client
        session_id = http.post(
            "/sessions",
            json={"mode": "scripted", "keyword_1": "silk", "keyword_2": "energy-intensive",
                  "alpha": 0.0},
        ).json()["id"]
        manager.wait(session_id)
        md = http.get(f"/sessions/{session_id}/document.md")
        assert md.status_code == 200
        assert md.text.startswith("# Research concept between silk and energy-intensive")
        doc = http.get(f"/sessions/{session_id}/document.json").json()
        assert doc["proposal"]["fields"]["hypothesis"] == "CONTENT_HYPOTHESIS"
        csv_text = http.get(f"/sessions/{session_id}/document.csv").text
        assert csv_text.splitlines()[0].startswith("start_node,end_node,path_string")

    def test_human_message_wrong_mode_409(self, client):
        http, manager = client
        session_id = http.post(
            "/sessions",
            json={"mode": "scripted", "keyword_1": "silk", "keyword_2": "energy-intensive",
                  "alpha": 0.0},
        ).json()["id"]
        manager.wait(session_id)
        response = http.post(f"/sessions/{session_id}/human-message", json={"text": "hi"})
        assert response.status_code == 409

    def test_graph_stats(self, client):
        http, _ = client
        assert http.get("/graph/stats").json() == {"nodes": 5, "edges": 6}

    def test_graph_path_endpoint(self, client):
        http, _ = client
        response = http.get(
            "/graph/path",
            params={"from": "silk", "to": "energy-intensive", "alpha": 0.0, "seed": 1},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["labels"][0] == "silk"
        assert body["labels"][-1] == "energy-intensive"
        assert body["path_string"].startswith("silk --> ")
        assert body["subgraph"]["nodes"]
