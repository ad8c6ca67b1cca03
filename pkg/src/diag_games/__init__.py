"""Strategies, adversaries and exhaustive checks for the Cantor-Kronecker diagonalization game."""
from .core import (
    BudgetExceeded,
    CellOverwrite,
    CellState,
    DecisionClaim,
    DuplicateQuery,
    GameError,
    GameParams,
    InvalidParams,
    PartialMatrix,
    Query,
    Regime,
    SearchClaim,
    Transcript,
    new_partial_matrix,
)

__all__ = [
    "BudgetExceeded",
    "CellOverwrite",
    "CellState",
    "DecisionClaim",
    "DuplicateQuery",
    "GameError",
    "GameParams",
    "InvalidParams",
    "PartialMatrix",
    "Query",
    "Regime",
    "SearchClaim",
    "Transcript",
    "new_partial_matrix",
]

__version__ = "0.1.0"
