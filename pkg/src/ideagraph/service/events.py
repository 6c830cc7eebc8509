"""Per-session append-only event log with tailing readers.

One JSONL file per session. Events are never rewritten; readers replay
from any sequence number and then follow live appends until the session
reaches a terminal status. Delivery to a reconnecting reader is
at-least-once: the boundary event may repeat, sequence numbers make
dedup trivial.
"""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path
from typing import Any, Iterator, Optional


class EventLog:
    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._count = self._count_existing()

    def _count_existing(self) -> int:
        if not self.path.exists():
            return 0
        with self.path.open(encoding="utf-8") as fh:
            return sum(1 for line in fh if line.strip())

    @property
    def count(self) -> int:
        with self._lock:
            return self._count

    def append(self, event_type: str, payload: dict[str, Any]) -> dict[str, Any]:
        with self._cond:
            event = {"seq": self._count, "type": event_type, "payload": payload, "ts": time.time()}
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, ensure_ascii=False) + "\n")
                fh.flush()
            self._count += 1
            self._cond.notify_all()
            return event

    def read_from(self, from_seq: int = 0) -> list[dict[str, Any]]:
        if not self.path.exists():
            return []
        events = []
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                event = json.loads(line)
                if event["seq"] >= from_seq:
                    events.append(event)
        return events

    def follow(
        self,
        from_seq: int = 0,
        stop: Optional[callable] = None,
        poll_timeout: float = 0.2,
        max_wait: float = 3600.0,
    ) -> Iterator[dict[str, Any]]:
        """Yield events >= from_seq, then block for live ones until stop()."""
        cursor = from_seq
        deadline = time.monotonic() + max_wait
        while True:
            batch = self.read_from(cursor)
            for event in batch:
                yield event
                cursor = event["seq"] + 1
            if stop is not None and stop() and self.count <= cursor:
                return
            if time.monotonic() > deadline:
                return
            with self._cond:
                if self._count <= cursor:
                    self._cond.wait(timeout=poll_timeout)
