import pytest

from starclip.adversaries import AdversaryPolicy
from starclip.harness import GameSpec, play_game, replay_transcript
from starclip.rules import Player, apply_move, new_game, parse_edge, replay
from starclip.strategy import (
    BuilderStrategy,
    MonitorLevel,
    StratPhase,
    StrategyStuck,
    claim_state_reached,
    guaranteed,
)


def test_opening_reply():
    gs = replay(200, 1, [(0, 1)])
    strat = BuilderStrategy(200, 1)
    assert strat.choose(gs) == (0, 2)
    assert strat.annotation == {"phase": "stage-pcg", "stage": 1, "branch": 4}


def test_out_of_turn():
    with pytest.raises(StrategyStuck):
        BuilderStrategy(200, 1).choose(new_game(200, 1))


def test_guaranteed_threshold():
    assert guaranteed(200, 1) and guaranteed(400, 2) and not guaranteed(399, 2)


def position(n, k, pi_edges, pii_edges):
    gs = new_game(n, k)
    for i, e in enumerate(pi_edges):
        apply_move(gs, e)
        if i < len(pii_edges):
            apply_move(gs, pii_edges[i])
    assert gs.status.ongoing
    return gs


def shifted_matching(n, count):
    return [(2 * i + 1, (2 * i + 2) % n) for i in range(count)]


def test_claim_state_two_deficient_non_adjacent():
    pii = [(2 * i, 2 * i + 1) for i in range(99)]
    gs = position(200, 1, shifted_matching(200, 99), pii)
    assert not gs.is_claimed(198, 199)
    assert claim_state_reached(gs, 1)


def test_claim_state_regular_is_false():
    pii = [(2 * i, 2 * i + 1) for i in range(5)]
    gs = position(10, 1, shifted_matching(10, 5), pii)
    assert not claim_state_reached(gs, 1)


def test_claim_state_adjacent_deficient_is_false():
    pii = [(2 * i, 2 * i + 1) for i in range(4)]
    gs = position(10, 1, [(8, 9)] + shifted_matching(10, 3), pii)
    assert gs.is_claimed(8, 9) and not claim_state_reached(gs, 1)


def test_full_game_even_parity():
    t = play_game(GameSpec(200, 1, "safe-random:42"))
    assert t["outcome"] == "PIIWin" and t["monitor_violations"] == [] and t["error"] is None
    assert t["losing_move_index"] == 101
    pii = [parse_edge(m["edge"]) for m in t["moves"] if m["player"] == "PII"]
    assert len(pii) == 100 and sorted(v for e in pii for v in e) == list(range(200))
    assert replay_transcript(t) == {"outcome": "PIIWin", "losing_move_index": 101}


def test_full_game_odd_parity():
    t = play_game(GameSpec(201, 1, "safe-random:3"))
    assert t["outcome"] == "PIIWin" and t["monitor_violations"] == []
    assert t["losing_move_index"] <= 101 and t["pii_edges"] == 100 and t["endgame"] is None


def test_pairing_step_rule():
    # replay a k=2 game, checking every pairing move against the rule directly
    t = play_game(GameSpec(400, 2, "s-attacker:1"))
    assert t["outcome"] == "PIIWin"
    gs = new_game(400, 2)
    pairing = 0
    for m in t["moves"]:
        e = parse_edge(m["edge"])
        if m["player"] == "PII" and m["annotation"]["phase"] == "stage-pairing":
            j = m["annotation"]["stage"]
            deg = gs.h_deg[Player.PII]
            s = min(v for v in range(400) if deg[v] == j - 1)
            w = min(v for v in range(400) if deg[v] == j and v != s and not gs.is_claimed(s, v))
            assert e == (min(s, w), max(s, w))
            pairing += 1
        apply_move(gs, e)
    assert pairing >= 1


@pytest.mark.parametrize("adv", ["safe-random:0", "safe-random:1", "degree-attacker:2", "s-attacker:3"])
def test_endgame_window_decision(adv):
    t = play_game(GameSpec(200, 1, adv))
    eg = t["endgame"]
    assert eg is not None and len(eg["pi_safe"]) <= 1
    pii = [m for m in t["moves"] if m["player"] == "PII"]
    tail = [m["edge"] for m in pii[99 - 1:]]
    if len(eg["pi_safe"]) == 1 and eg["pi_safe"][0] in (eg["e1"], eg["e2"]):
        assert tail[0] == eg["pi_safe"][0]
    else:
        assert tail == [eg["e1"], eg["e2"]]


def test_best_effort_flagged():
    t = play_game(GameSpec(50, 1, "random:0"))
    assert t["unguaranteed"] and not t["guaranteed"]


def test_stuck_on_foreign_position():
    gs = replay(200, 1, [(0, 1)])
    strat = BuilderStrategy(200, 1, MonitorLevel.ASSERT)
    apply_move(gs, strat.choose(gs))
    apply_move(gs, (5, 6))
    strat.choose(gs)
    other = replay(200, 1, [(0, 1), (3, 4), (5, 6)])
    with pytest.raises(StrategyStuck):
        strat.choose(other)


def test_phases_progress():
    n, k = 400, 2
    gs = new_game(n, k)
    strat = BuilderStrategy(n, k)
    pi = AdversaryPolicy.parse("safe-random:9")
    seen = set()
    while gs.status.ongoing:
        if gs.to_move is Player.PI:
            apply_move(gs, pi.next_move(gs))
        else:
            apply_move(gs, strat.choose(gs))
            seen.add(strat.phase)
    assert gs.status.loser is Player.PI
    assert {StratPhase.STAGE_PCG, StratPhase.STAGE_START} <= seen
    assert strat.violations == []
