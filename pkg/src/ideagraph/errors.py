"""Exception hierarchy shared across the package.

Every error raised by ideagraph derives from IdeagraphError so callers can
catch the whole family with one clause. Subclasses carry enough structure
(node ids, step names, raw bodies) for callers to react programmatically.
"""

from __future__ import annotations


class IdeagraphError(Exception):
    """Base class for all ideagraph errors."""


class ArgumentError(IdeagraphError):
    """A caller-supplied argument violates a precondition."""


class EmptyInputError(IdeagraphError):
    """An input that must be non-empty (graph, stream, node set) is empty."""


class GraphParseError(IdeagraphError):
    """GraphML input is not well-formed XML."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class GraphIntegrityError(IdeagraphError):
    """The parsed graph violates a structural invariant (e.g. dangling edge)."""


class LookupError_(IdeagraphError):
    """A node id is not present in the graph."""


class NoPathError(IdeagraphError):
    """Source and target lie in different connected components."""

    def __init__(self, source: str, target: str):
        self.source = source
        self.target = target
        super().__init__(
            f"no path exists: {source!r} and {target!r} are in different components"
        )


class CacheInvalidError(IdeagraphError):
    """A persisted embedding cache disagrees with the configured backend."""


class PartialEmbeddingError(IdeagraphError):
    """The embedding backend failed before covering every node."""

    def __init__(self, uncovered: list[str]):
        self.uncovered = list(uncovered)
        preview = ", ".join(self.uncovered[:5])
        more = "" if len(self.uncovered) <= 5 else f" (+{len(self.uncovered) - 5} more)"
        super().__init__(f"embeddings missing for {len(self.uncovered)} nodes: {preview}{more}")


class BackendUnavailableError(IdeagraphError):
    """A remote backend kept failing after the configured retries."""


class ProtocolError(IdeagraphError):
    """A remote backend replied with a body we cannot interpret."""

    def __init__(self, message: str, raw_body: str = ""):
        self.raw_body = raw_body
        super().__init__(message)


class ScriptedExhaustedError(IdeagraphError):
    """A scripted backend ran out of canned responses."""


class ProposalParseError(IdeagraphError):
    """No JSON object could be extracted from a model response."""


class ProposalSchemaError(IdeagraphError):
    """A parsed proposal is missing required keys."""

    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        super().__init__(f"proposal missing required keys: {', '.join(self.missing)}")


class AssemblyError(IdeagraphError):
    """A mandatory document part is absent at assembly time."""


class PipelineError(IdeagraphError):
    """The scripted pipeline failed at a named step."""

    def __init__(self, step: str, message: str, raw: str = ""):
        self.step = step
        self.raw = raw
        super().__init__(f"pipeline step {step!r} failed: {message}")


class SearchUnavailableError(IdeagraphError):
    """The scholarly search endpoint kept failing after retries."""


class ScoreParseError(IdeagraphError):
    """Novelty/feasibility scores could not be parsed from a reply."""


class ScoreOutOfRangeError(ScoreParseError):
    """A parsed score falls outside the 1-10 range."""


class AssessmentError(IdeagraphError):
    """The novelty assessment loop ended without usable scores."""

    def __init__(self, message: str, final_message: str = ""):
        self.final_message = final_message
        super().__init__(message)


class SessionStateError(IdeagraphError):
    """An operation is not valid for the session's current status or mode."""


class SessionNotFoundError(IdeagraphError):
    """No session with the given id exists."""


class ConfigError(IdeagraphError):
    """A configuration value is out of range or malformed."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"invalid config field {field!r}: {message}")
