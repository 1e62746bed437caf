"""Star avoidance game engine, pair clipping strategy, and exact solver."""

from starclip.graph import SparseProfile, WorkGraph, find_nice_pair, is_fg_sparse, is_g_sparse, is_nice_pair
from starclip.rules import Outcome, Player, StarState, apply_move, ex_bound, legal_moves, new_game, safe_moves
from starclip.solver import solve
from starclip.strategy import BuilderStrategy

__all__ = [
    "BuilderStrategy",
    "Outcome",
    "Player",
    "SparseProfile",
    "StarState",
    "WorkGraph",
    "apply_move",
    "ex_bound",
    "find_nice_pair",
    "is_fg_sparse",
    "is_g_sparse",
    "is_nice_pair",
    "legal_moves",
    "new_game",
    "safe_moves",
    "solve",
]
