"""Path-string rendering: `silk --> provides --> biocompatibility`."""

from __future__ import annotations

from .types import PathSample

ARROW = " --> "


def render_path_string(labels: list[str], relations: list[str]) -> str:
    """Interleave concept labels and relation labels, always reading forward.

    Stored edge direction is irrelevant here: the walk order decides, and the
    relation label is rendered between each consecutive label pair.
    """
    if len(relations) != max(0, len(labels) - 1):
        raise ValueError("relations must have exactly len(labels) - 1 entries")
    parts: list[str] = []
    for i, label in enumerate(labels):
        parts.append(label)
        if i < len(relations):
            parts.append(relations[i])
    return ARROW.join(parts)


def serialize_path(sample: PathSample) -> str:
    return render_path_string(sample.labels, sample.relations)
