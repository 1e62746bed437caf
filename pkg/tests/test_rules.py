import random
from itertools import combinations

import pytest

from starclip.rules import (
    AlreadyClaimed,
    GameOver,
    InvalidParams,
    Outcome,
    Player,
    RulesError,
    apply_move,
    ex_bound,
    legal_moves,
    new_game,
    parse_edge,
    replay,
    safe_moves,
)


@pytest.mark.parametrize("n,edges", [(3, 3), (2, 1), (6, 15)])
def test_new_game_edge_count(n, edges):
    s = new_game(n, 1)
    assert s.total_edges == edges and s.to_move is Player.PI and s.status.ongoing


@pytest.mark.parametrize("n,k", [(0, 1), (3, 0), (-1, 2)])
def test_invalid_params(n, k):
    with pytest.raises(InvalidParams):
        new_game(n, k)


def test_single_vertex_board_is_drawn():
    assert new_game(1, 1).status.outcome is Outcome.DRAW


def test_legal_moves():
    s = new_game(3, 1)
    assert legal_moves(s) == [(0, 1), (0, 2), (1, 2)]
    apply_move(s, (0, 1))
    assert legal_moves(s) == [(0, 2), (1, 2)]


def test_legal_moves_after_end():
    s = replay(3, 1, [(0, 1), (0, 2), (1, 2)])
    with pytest.raises(GameOver):
        legal_moves(s)
    with pytest.raises(GameOver):
        apply_move(s, (0, 1))


def test_safe_moves_k1():
    s = new_game(3, 1)
    assert safe_moves(s, Player.PI) == [(0, 1), (0, 2), (1, 2)]
    apply_move(s, (0, 1))
    assert safe_moves(s, Player.PI) == []


def test_safe_moves_k2():
    s = replay(4, 2, [(0, 1), (2, 3), (0, 2)])
    assert safe_moves(s, Player.PI) == [(1, 2), (1, 3)]


def test_loss_on_triangle():
    s = replay(3, 1, [(0, 1), (0, 2), (1, 2)])
    assert s.status.loser is Player.PI and s.status.outcome is Outcome.PII_WIN
    assert s.status.losing_move_index == 2


def test_single_edge_draw():
    s = replay(2, 1, [(0, 1)])
    assert s.status.outcome is Outcome.DRAW


def test_k1_second_edge_at_vertex_loses():
    s = replay(4, 1, [(0, 1), (2, 3), (0, 2)])
    assert s.status.loser is Player.PI


def test_claimed_and_bad_edges():
    s = replay(4, 1, [(0, 1)])
    with pytest.raises(AlreadyClaimed):
        apply_move(s, (1, 0))
    with pytest.raises(RulesError):
        apply_move(s, (2, 2))
    with pytest.raises(RulesError):
        apply_move(s, (2, 9))


@pytest.mark.parametrize("n,k,bound", [(6, 3, 9), (5, 2, 5), (3, 1, 1)])
def test_ex_bound(n, k, bound):
    assert ex_bound(n, k) == bound


def test_parse_edge():
    assert parse_edge("3-1") == (1, 3)
    with pytest.raises(RulesError):
        parse_edge("3 x")


def brute_status(n, k, edges):
    """Independent scorer: first move at which the mover holds a vertex of degree k+1."""
    held = {Player.PI: [], Player.PII: []}
    p = Player.PI
    for e in edges:
        held[p].append(e)
        deg = {}
        for u, v in held[p]:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        if max(deg.values()) > k:
            return p, len(held[p])
        p = p.other
    return None, None


def test_random_games_match_independent_scorer():
    rng = random.Random(11)
    for _ in range(300):
        n, k = rng.randint(2, 9), rng.randint(1, 3)
        edges = list(combinations(range(n), 2))
        rng.shuffle(edges)
        s = new_game(n, k)
        played = []
        for e in edges:
            if not s.status.ongoing:
                break
            apply_move(s, e)
            played.append(e)
        loser, idx = brute_status(n, k, played)
        assert s.status.loser == loser and s.status.losing_move_index == idx
        assert not s.status.ongoing


def test_copy_is_independent():
    s = replay(5, 2, [(0, 1)])
    t = s.copy()
    apply_move(t, (1, 2))
    assert s.claimed_count == 1 and t.claimed_count == 2 and s.to_move is Player.PII
