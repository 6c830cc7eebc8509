"""Session lifecycle: creation, orchestration threads, persistence, recovery.

A session owns an append-only event log (its audit trail and streaming
source) plus a small meta file with status and config. Scripted sessions
emit one transcript entry per pipeline step; group-chat sessions emit every
chat entry. Replaying a session's event log reconstructs its transcript
prefix exactly, which is both the crash-recovery path and the UI's replay
path.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from ..agents.groupchat import GroupChatConfig, run_group_chat
from ..agents.profiles import group_chat_roster
from ..agents.scripted import ScriptedPipelineConfig, run_scripted_pipeline
from ..agents.tools import ToolContext, build_default_registry
from ..agents.transcript import Transcript, TranscriptEntry
from ..errors import ConfigError, SessionNotFoundError, SessionStateError
from ..graph.embeddings import EmbeddingStore
from ..graph.model import KnowledgeGraph
from ..llm.backends import LlmGateway
from ..llm.trace import TraceLog
from ..novelty.assess import assess_novelty
from ..novelty.scholar import SearchBackend
from ..pathing.types import PathConfig
from ..pathing.viz import render_figure
from ..proposal.document import (
    ResearchDocument,
    assemble_document,
    document_slug,
    export_document,
)
from .events import EventLog

logger = logging.getLogger(__name__)

MODES = ("scripted", "group_chat")
TERMINAL = ("finished", "failed")


@dataclass
class SessionRequest:
    mode: str = "scripted"
    keyword_1: Optional[str] = None
    keyword_2: Optional[str] = None
    alpha: float = 0.2
    k_waypoints: int = 0
    hops: int = 2
    seed: int = 0
    path_mode: str = "random"
    max_turns: int = 30
    temperature: float = 0.7
    novelty: bool = False
    human_wait: float = 0.0  # seconds the chat blocks when the manager picks the human

    def validate(self) -> "SessionRequest":
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {self.mode!r}")
        # PathConfig re-checks ranges; surface its field names directly
        self.path_config()
        if self.max_turns < 1:
            raise ConfigError("max_turns", f"must be >= 1, got {self.max_turns}")
        if self.temperature < 0:
            raise ConfigError("temperature", f"must be >= 0, got {self.temperature}")
        return self

    def path_config(self) -> PathConfig:
        return PathConfig(
            alpha=self.alpha,
            k_waypoints=self.k_waypoints,
            hops=self.hops,
            seed=self.seed,
            mode=self.path_mode,
        )

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SessionRequest":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class BackendBundle:
    """Factories so each session gets fresh backend state."""

    make_gateway: Callable[[], LlmGateway]
    make_manager_gateway: Optional[Callable[[], LlmGateway]] = None
    make_search: Optional[Callable[[], SearchBackend]] = None


class Session:
    def __init__(self, session_id: str, request: SessionRequest, directory: Path):
        self.id = session_id
        self.request = request
        self.directory = directory
        self.status = "running"
        self.transcript = Transcript()
        self.document: Optional[ResearchDocument] = None
        self.sample = None
        self.human_queue: queue.Queue = queue.Queue()
        self.events = EventLog(directory / f"{session_id}.events.jsonl")
        self.meta_path = directory / f"{session_id}.meta.json"
        self.error: str = ""
        self.export_paths: dict[str, str] = {}
        self._thread: Optional[threading.Thread] = None

    def snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "mode": self.request.mode,
            "status": self.status,
            "config": self.request.to_dict(),
            "error": self.error,
            "document_ready": self.document is not None,
            "event_count": self.events.count,
            "exports": self.export_paths,
        }

    def save_meta(self):
        self.meta_path.write_text(
            json.dumps(self.snapshot(), ensure_ascii=False, indent=2), encoding="utf-8"
        )

    def set_status(self, status: str):
        self.status = status
        self.events.append("status", {"status": status})
        self.save_meta()

    def record_entry(self, entry: TranscriptEntry):
        self.events.append("entry", entry.to_dict())

    def is_terminal(self) -> bool:
        return self.status in TERMINAL


class SessionManager:
    def __init__(
        self,
        graph: KnowledgeGraph,
        store: EmbeddingStore,
        backends: BackendBundle,
        data_dir: Path,
        export_dir: Optional[Path] = None,
    ):
        self.graph = graph
        self.store = store
        self.backends = backends
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.export_dir = Path(export_dir) if export_dir else self.data_dir / "exports"
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def create_session(self, request: SessionRequest, synchronous: bool = False) -> str:
        if self.graph is None or self.graph.node_count == 0:
            raise SessionStateError("no graph loaded")
        request.validate()
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, request, self.data_dir)
        with self._lock:
            self.sessions[session_id] = session
        session.set_status("running")
        runner = self._run_scripted if request.mode == "scripted" else self._run_group_chat
        if synchronous:
            runner(session)
        else:
            thread = threading.Thread(target=runner, args=(session,), daemon=True)
            session._thread = thread
            thread.start()
        return session_id

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise SessionNotFoundError(f"unknown session {session_id!r}") from None

    def wait(self, session_id: str, timeout: float = 60.0):
        session = self.get(session_id)
        if session._thread is not None:
            session._thread.join(timeout=timeout)
        return session

    def post_human_message(self, session_id: str, text: str) -> dict[str, Any]:
        session = self.get(session_id)
        if session.request.mode != "group_chat":
            raise SessionStateError("human messages are only supported for group_chat sessions")
        if session.status not in ("running", "awaiting_human"):
            raise SessionStateError(f"session is {session.status}; not accepting messages")
        if not text.strip():
            raise ConfigError("text", "must be non-empty")
        session.human_queue.put(text)
        return {"queued": True}

    # -- orchestration runners --------------------------------------------

    def _session_gateway(self, session: Session) -> LlmGateway:
        gateway = self.backends.make_gateway()
        if gateway.trace is None:
            gateway.trace = TraceLog(session.directory / f"{session.id}.trace.jsonl")
        return gateway

    def _run_scripted(self, session: Session):
        request = session.request
        gateway = self._session_gateway(session)
        novelty_hook = None
        if request.novelty and self.backends.make_search is not None:
            search = self.backends.make_search()
            novelty_gateway = self.backends.make_gateway()

            def novelty_hook(proposal):
                return assess_novelty(proposal, novelty_gateway, search)

        def on_step(step: str, author: str, content: str):
            entry = session.transcript.append(author, "message", content)
            session.record_entry(entry)

        try:
            result = run_scripted_pipeline(
                self.graph,
                self.store,
                gateway,
                keyword_1=request.keyword_1,
                keyword_2=request.keyword_2,
                cfg=ScriptedPipelineConfig(
                    path=request.path_config(), temperature=request.temperature
                ),
                novelty=novelty_hook,
                on_step=on_step,
            )
        except Exception as exc:
            logger.exception("scripted session %s failed", session.id)
            session.error = str(exc)
            session.set_status("failed")
            return
        session.document = result.document
        session.sample = result.sample
        self._export(session, result.document, result.sample)
        session.set_status("finished")

    def _run_group_chat(self, session: Session):
        request = session.request
        gateway = self._session_gateway(session)
        manager_gateway = (
            self.backends.make_manager_gateway() if self.backends.make_manager_gateway else gateway
        )
        search = self.backends.make_search() if self.backends.make_search else None
        ctx = ToolContext(
            graph=self.graph,
            store=self.store,
            gateway=gateway,
            path_config=request.path_config(),
            search=search,
        )
        registry = build_default_registry(ctx)
        task = _task_text(request)
        try:
            result = run_group_chat(
                task,
                group_chat_roster(),
                registry,
                GroupChatConfig(
                    max_turns=request.max_turns,
                    temperature=request.temperature,
                    human_timeout=request.human_wait,
                ),
                gateway,
                manager_gateway=manager_gateway,
                tool_context=ctx,
                human_queue=session.human_queue,
                on_entry=lambda entry: _mirror_entry(session, entry),
                on_status=lambda status: session.set_status(status),
            )
        except Exception as exc:
            logger.exception("group chat session %s failed", session.id)
            session.error = str(exc)
            session.set_status("failed")
            return
        session.transcript = result.transcript
        session.document = result.document
        session.sample = ctx.last_sample
        if result.document is not None:
            self._export(session, result.document, ctx.last_sample)
        session.set_status("finished")

    def _export(self, session: Session, document: ResearchDocument, sample):
        """Write md/csv/json plus the subgraph figure; never kills a session."""
        try:
            out_dir = self.export_dir / session.id
            paths = export_document(document, out_dir)
            session.export_paths = {k: str(p) for k, p in paths.items()}
            if sample is not None:
                slug = document_slug(document.start_node, document.end_node)
                figure = render_figure(sample, out_dir / f"{slug}.png")
                session.export_paths["png"] = str(figure)
        except Exception as exc:
            logger.warning("export failed for session %s: %s", session.id, exc)

    # -- documents and recovery -------------------------------------------

    def document_markdown(self, session_id: str) -> str:
        session = self.get(session_id)
        if session.document is None:
            raise SessionStateError("session has no document")
        return assemble_document(session.document)

    def document_json(self, session_id: str) -> dict[str, Any]:
        session = self.get(session_id)
        if session.document is None:
            raise SessionStateError("session has no document")
        return session.document.to_dict()

    def document_csv(self, session_id: str) -> str:
        session = self.get(session_id)
        path = session.export_paths.get("csv")
        if not path or not Path(path).exists():
            raise SessionStateError("session has no CSV export")
        return Path(path).read_text(encoding="utf-8")

    def replay_transcript(self, session_id: str) -> Transcript:
        """Rebuild a transcript purely from the persisted event log."""
        log = EventLog(self.data_dir / f"{session_id}.events.jsonl")
        transcript = Transcript()
        for event in log.read_from(0):
            if event["type"] == "entry":
                transcript.restore(TranscriptEntry.from_dict(event["payload"]))
        return transcript

    def recover(self) -> list[str]:
        """Re-attach sessions found on disk after a restart.

        Transcripts are rebuilt from event logs; sessions that were still
        running when the process died are marked failed (their logs remain
        replayable).
        """
        recovered = []
        for meta_path in sorted(self.data_dir.glob("*.meta.json")):
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            session_id = meta["id"]
            if session_id in self.sessions:
                continue
            request = SessionRequest.from_dict(meta.get("config", {}))
            session = Session(session_id, request, self.data_dir)
            session.status = meta.get("status", "failed")
            session.transcript = self.replay_transcript(session_id)
            session.export_paths = meta.get("exports", {})
            if session.status not in TERMINAL:
                session.error = "interrupted by restart"
                session.set_status("failed")
            self.sessions[session_id] = session
            recovered.append(session_id)
        return recovered


def _task_text(request: SessionRequest) -> str:
    if request.keyword_1 and request.keyword_2:
        return (
            "Develop a research proposal using the knowledge path between "
            f"{request.keyword_1!r} and {request.keyword_2!r}. Rate its novelty and feasibility."
        )
    return "Develop a research proposal using a knowledge path between randomly selected concepts. Rate its novelty and feasibility."


def _mirror_entry(session: Session, entry: TranscriptEntry):
    session.record_entry(entry)
    if session.status == "awaiting_human" and entry.kind == "human_intervention":
        session.set_status("running")
