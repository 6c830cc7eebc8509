from .assess import assess_novelty, format_hits, parse_scores
from .scholar import RateLimiter, SemanticScholarClient, StaticSearchBackend
from .types import MAX_HITS, MAX_QUERIES, NoveltyReport, PaperRecord

__all__ = [
    "MAX_HITS",
    "MAX_QUERIES",
    "NoveltyReport",
    "PaperRecord",
    "RateLimiter",
    "SemanticScholarClient",
    "StaticSearchBackend",
    "assess_novelty",
    "format_hits",
    "parse_scores",
]
