"""Few-colour connected subgraphs of edge-coloured complete graphs."""

from .core import (
    ColourSet,
    DomainError,
    EdgeColouring,
    ExactRecord,
    FeasibilityError,
    GuaranteeReport,
    Hypergraph,
    ParseError,
)

__version__ = "0.1.0"

__all__ = [
    "ColourSet",
    "DomainError",
    "EdgeColouring",
    "ExactRecord",
    "FeasibilityError",
    "GuaranteeReport",
    "Hypergraph",
    "ParseError",
]
