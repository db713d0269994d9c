"""Exception hierarchy shared by all modules.

Validation failures carry enough context (part id, key-view index) for a CLI
or HTTP layer to point at the offending field.
"""

from __future__ import annotations


class Cartoon25dError(Exception):
    """Base class for all package errors."""


class ParseError(Cartoon25dError):
    """Document is not syntactically valid (bad JSON, missing/mistyped fields)."""


class ValidationError(Cartoon25dError):
    """Document or model violates a semantic invariant."""

    kind = "invalid"

    def __init__(self, message: str, *, part_id: str | None = None,
                 key_view_index: int | None = None):
        detail = message
        if part_id is not None:
            detail += f" (part {part_id!r})"
        if key_view_index is not None:
            detail += f" (key view {key_view_index})"
        super().__init__(detail)
        self.part_id = part_id
        self.key_view_index = key_view_index


class DegenerateTriangle(ValidationError):
    kind = "degenerate_triangle"


class VertexCountMismatch(ValidationError):
    kind = "vertex_count_mismatch"


class DuplicateKeyView(ValidationError):
    kind = "duplicate_key_view"


class NonOrthonormalView(ValidationError):
    kind = "non_orthonormal_view"


class EmptyModel(ValidationError):
    kind = "empty_model"


class TopologyMismatch(ValidationError):
    kind = "topology_mismatch"


class UnsolvedModel(Cartoon25dError):
    """Operation requires a solved model (run the solver first)."""


class ReflectionError(Cartoon25dError):
    """2x2 map has non-positive determinant: flipped or collapsed triangle."""


class NotPositiveDefinite(Cartoon25dError):
    """Symmetric matrix has an eigenvalue at or below the positivity floor."""


class SingularSystem(Cartoon25dError):
    """Shape assembly system is rank-deficient beyond its translation null space."""


class DegenerateConfiguration(Cartoon25dError):
    """A baseline weight scheme cannot discriminate between the key views."""


class OutOfRange(Cartoon25dError):
    """Sample time lies outside the track's keyframe span."""
