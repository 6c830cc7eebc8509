"""Literature-search result types."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PaperRecord:
    title: str
    abstract: str | None = None
    external_id: str = ""

    def __post_init__(self):
        if not self.title.strip():
            raise ValueError("PaperRecord.title must be non-empty")


MAX_QUERIES = 3
MAX_HITS = 10


@dataclass
class NoveltyReport:
    """Outcome of the literature assessment loop."""

    queries: list[str] = field(default_factory=list)
    hits: dict[str, list[PaperRecord]] = field(default_factory=dict)
    novelty: int = 0
    feasibility: int = 0
    rationale: str = ""

    def __post_init__(self):
        if not 1 <= self.novelty <= 10:
            raise ValueError(f"novelty score {self.novelty} outside 1-10")
        if not 1 <= self.feasibility <= 10:
            raise ValueError(f"feasibility score {self.feasibility} outside 1-10")
        if len(self.queries) > MAX_QUERIES:
            raise ValueError(f"at most {MAX_QUERIES} queries allowed")
        for query, records in self.hits.items():
            if len(records) > MAX_HITS:
                raise ValueError(f"hit list for {query!r} exceeds {MAX_HITS}")

    def to_dict(self) -> dict:
        return {
            "queries": list(self.queries),
            "hits": {
                q: [
                    {"title": r.title, "abstract": r.abstract, "external_id": r.external_id}
                    for r in records
                ]
                for q, records in self.hits.items()
            },
            "novelty": self.novelty,
            "feasibility": self.feasibility,
            "rationale": self.rationale,
        }

    def summary_text(self) -> str:
        return (
            f"Novelty: {self.novelty}/10\n"
            f"Feasibility: {self.feasibility}/10\n\n"
            f"{self.rationale}"
        )
