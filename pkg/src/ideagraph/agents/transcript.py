"""Append-only group-chat transcript with structural invariants."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Optional

ENTRY_KINDS = ("message", "tool_call", "tool_result", "human_intervention", "termination")


@dataclass
class TranscriptEntry:
    seq: int
    author: str
    kind: str
    content: str
    timestamp: float
    call_id: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        data = {
            "seq": self.seq,
            "author": self.author,
            "kind": self.kind,
            "content": self.content,
            "timestamp": self.timestamp,
        }
        if self.call_id is not None:
            data["call_id"] = self.call_id
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TranscriptEntry":
        return cls(
            seq=data["seq"],
            author=data["author"],
            kind=data["kind"],
            content=data["content"],
            timestamp=data.get("timestamp", 0.0),
            call_id=data.get("call_id"),
        )


class Transcript:
    """Entries with gapless sequence numbers; at most one terminal entry."""

    def __init__(self):
        self.entries: list[TranscriptEntry] = []

    def append(
        self, author: str, kind: str, content: str, call_id: Optional[str] = None
    ) -> TranscriptEntry:
        if kind not in ENTRY_KINDS:
            raise ValueError(f"unknown entry kind {kind!r}")
        if self.terminated:
            raise ValueError("cannot append after a termination entry")
        entry = TranscriptEntry(
            seq=len(self.entries),
            author=author,
            kind=kind,
            content=content,
            timestamp=time.time(),
            call_id=call_id,
        )
        self.entries.append(entry)
        return entry

    def restore(self, entry: TranscriptEntry):
        """Re-attach a persisted entry during replay; sequence must fit exactly."""
        if entry.seq != len(self.entries):
            raise ValueError(f"replayed entry seq {entry.seq}, expected {len(self.entries)}")
        self.entries.append(entry)

    @property
    def terminated(self) -> bool:
        return bool(self.entries) and self.entries[-1].kind == "termination"

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def check_invariants(self):
        for i, entry in enumerate(self.entries):
            assert entry.seq == i, f"sequence gap at {i}: entry says {entry.seq}"
            assert entry.kind in ENTRY_KINDS
        terminals = [e for e in self.entries if e.kind == "termination"]
        assert len(terminals) <= 1, "multiple termination entries"
        if terminals:
            assert self.entries[-1].kind == "termination", "termination entry is not last"
        # every tool_call is answered by exactly one matching tool_result
        # before its author speaks again
        for i, entry in enumerate(self.entries):
            if entry.kind != "tool_call":
                continue
            matches = 0
            for later in self.entries[i + 1 :]:
                if later.kind == "message" and later.author == entry.author:
                    break
                if later.kind == "tool_result" and later.call_id == entry.call_id:
                    matches += 1
            assert matches == 1, (
                f"tool_call {entry.call_id!r} answered {matches} times before "
                f"{entry.author!r} speaks again"
            )

    def tail_text(self, max_entries: int = 12, max_chars_per_entry: int = 600) -> str:
        """Compact rendering of the latest entries for speaker selection."""
        lines = []
        for entry in self.entries[-max_entries:]:
            content = entry.content
            if len(content) > max_chars_per_entry:
                content = content[: max_chars_per_entry - 3] + "..."
            lines.append(f"[{entry.kind}] {entry.author}: {content}")
        return "\n".join(lines) if lines else "(no messages yet)"
