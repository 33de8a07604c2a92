"""Tic-tac-toe decision-tree bot with minimax baselines, exhaustive verifier and timing metrics."""

from ._core import (
    GameError,
    candidates,
    choose,
    classify,
    d4_transforms,
    enumerate_games,
    fork_moves,
    outcome,
    play_game,
    search,
    speedup,
    to_move,
    tpg,
    tpm,
    verify_no_loss,
    winning_moves,
)

__all__ = [
    "GameError",
    "candidates",
    "choose",
    "classify",
    "d4_transforms",
    "enumerate_games",
    "fork_moves",
    "outcome",
    "play_game",
    "search",
    "speedup",
    "to_move",
    "tpg",
    "tpm",
    "verify_no_loss",
    "winning_moves",
]
