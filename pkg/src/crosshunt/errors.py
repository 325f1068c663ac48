"""Exception types shared across the package."""

from __future__ import annotations


class CrosshuntError(Exception):
    """Base class for all domain errors raised by this package."""


class GraphFormatError(CrosshuntError):
    """A graph document violates the interchange format."""


class DanglingEdgeError(GraphFormatError):
    """An edge references a node id that is not defined in the document."""


class DuplicateNodeError(GraphFormatError):
    """A node id is defined more than once in the same document."""


class StoreError(CrosshuntError):
    """A corpus store operation failed."""


class GraphNotFoundError(StoreError):
    """Requested graph id is not present in the store."""


class DuplicateGraphError(StoreError):
    """A graph with the same id is already present in the store."""


class UnbucketizedNodeError(CrosshuntError):
    """A node has no bucket assignment where one is required."""


class MissingSeedError(CrosshuntError):
    """A hunt seed id is absent from the corpus."""


class CoverageGapError(CrosshuntError):
    """Ground truth does not cover every item being evaluated."""
