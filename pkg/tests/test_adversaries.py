import pytest

from starclip.adversaries import AdversaryPolicy, ScriptExhausted, s_class
from starclip.rules import GameOver, Player, apply_move, new_game, replay
from starclip.strategy import BuilderStrategy


def test_replay_script():
    p = AdversaryPolicy.parse("replay:0:script=0-1")
    assert p.next_move(new_game(3, 1)) == (0, 1)


def test_replay_exhausted_without_fallback():
    p = AdversaryPolicy.parse("replay:0:script=0-1")
    gs = replay(5, 1, [(0, 1), (2, 3)])
    with pytest.raises(ScriptExhausted):
        p.next_move(gs)


def test_replay_fallback():
    p = AdversaryPolicy.parse("replay:4:fallback=safe-random,script=0-1")
    gs = replay(6, 1, [(0, 1), (2, 3)])
    e = p.next_move(gs)
    assert not gs.is_claimed(*e) and 0 not in e and 1 not in e


@pytest.mark.parametrize("name", ["random", "safe-random", "s-attacker", "degree-attacker", "minimax"])
def test_deterministic(name):
    gs = replay(12, 1, [(0, 1), (2, 3), (4, 5)])
    a = AdversaryPolicy.parse(f"{name}:7").next_move(gs)
    b = AdversaryPolicy.parse(f"{name}:7").next_move(gs.copy())
    assert a == b and not gs.is_claimed(*a)


def test_seeds_differ():
    gs = new_game(60, 1)
    moves = {AdversaryPolicy.parse(f"random:{s}").next_move(gs) for s in range(20)}
    assert len(moves) > 1


def test_s_attacker_plays_inside_low_class():
    gs = replay(20, 1, [(0, 1)])
    apply_move(gs, BuilderStrategy(20, 1).choose(gs))
    cls = s_class(gs)
    assert len(cls) == 18
    u, v = AdversaryPolicy.parse("s-attacker:0").next_move(gs)
    assert u in cls and v in cls and not gs.is_claimed(u, v)


def test_safe_policies_stay_safe_while_possible():
    for name in ("safe-random", "s-attacker", "degree-attacker"):
        gs = new_game(30, 2)
        p = AdversaryPolicy.parse(f"{name}:3")
        for _ in range(20):
            e = p.next_move(gs)
            assert gs.h_deg[Player.PI][e[0]] < 2 and gs.h_deg[Player.PI][e[1]] < 2
            apply_move(gs, e)
            apply_move(gs, next(x for x in [(a, b) for a in range(30) for b in range(a + 1, 30)]
                                if not gs.is_claimed(*x) and gs.h_deg[Player.PII][x[0]] < 2
                                and gs.h_deg[Player.PII][x[1]] < 2))


def test_spec_round_trip():
    p = AdversaryPolicy.parse("replay:3:fallback=1,script=0-1+2-3")
    q = AdversaryPolicy.parse(p.spec())
    assert q == p and q.with_seed(9).seed == 9


@pytest.mark.parametrize("text", ["bogus", "random:1:oops"])
def test_bad_specs(text):
    with pytest.raises(ValueError):
        AdversaryPolicy.parse(text)


def test_finished_game():
    gs = replay(2, 1, [(0, 1)])
    with pytest.raises(GameOver):
        AdversaryPolicy.parse("random").next_move(gs)


def test_minimax_avoids_immediate_loss():
    # PI holds 0-1 on K4 with k=1; 2-3 is its only safe edge
    gs = replay(4, 1, [(0, 1), (0, 2)])
    assert AdversaryPolicy.parse("minimax:0:d=2").next_move(gs) == (2, 3)
