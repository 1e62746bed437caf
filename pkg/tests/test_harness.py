import json

from starclip.graph import WorkGraph, is_fg_sparse
from starclip.harness import (
    GameSpec,
    acceptance_specs,
    dumps,
    fixture_scripts,
    pcg_record,
    play_game,
    random_fg_sparse,
    replay_transcript,
    run_games,
    summarize,
)
from starclip.verify import (
    drawn_boards,
    g_sparse_boundary,
    nice_pair_exhaustive,
    nice_pair_random,
    clip_sparsity_exhaustive,
    clip_sparsity_random,
    nondraw_playouts,
    pcg_exhaustive,
    pcg_random,
)

import random


TRANSCRIPT_KEYS = {
    "version", "n", "k", "strategy", "adversary", "seed", "moves", "outcome",
    "losing_move_index", "monitor_violations", "config",
}


def test_transcript_fields_and_replay():
    t = play_game(GameSpec(200, 1, "degree-attacker:5"))
    assert TRANSCRIPT_KEYS <= set(t)
    assert t["config"] == {"n": 200, "k": 1, "adversary": "degree-attacker:5", "monitor": "assert"}
    assert replay_transcript(t) == {"outcome": t["outcome"], "losing_move_index": t["losing_move_index"]}
    assert json.loads(dumps(t)) == t


def test_fixture_scripts_parse_and_win():
    for adv in fixture_scripts(200, 1):
        t = play_game(GameSpec(200, 1, adv))
        assert t["outcome"] == "PIIWin" and t["monitor_violations"] == []


def test_acceptance_spec_counts():
    specs = acceptance_specs(200, 1)
    assert len(specs) == 350 + len(fixture_scripts(200, 1))
    assert specs[0].adversary == "random:0"


def test_parallel_matches_sequential():
    specs = [GameSpec(200, 1, f"safe-random:{s}") for s in range(4)]
    assert run_games(specs, 1) == run_games(specs, 2)


def test_summary_counts_losses():
    lines = run_games([GameSpec(200, 1, "random:1"), GameSpec(200, 1, "s-attacker:1")])
    s = summarize(lines)
    assert s.games == 2 and s.outcomes == {"PIIWin": 2} and s.clean


def test_random_sparse_generator():
    rng = random.Random(1)
    for v in (10, 20, 40):
        for heavy in (False, True):
            assert is_fg_sparse(random_fg_sparse(v, rng, heavy))


def test_pcg_record():
    rec = pcg_record(WorkGraph(41), "random", 0)
    assert rec["won"] and rec["violations"] == [] and len(rec["rounds"]) == 20


def test_g_sparse_boundary():
    assert g_sparse_boundary(100) == 100 and g_sparse_boundary(10) == 5


def test_small_suites_pass():
    for report in (
        nice_pair_exhaustive(6),
        nice_pair_random(200),
        clip_sparsity_exhaustive(5),
        clip_sparsity_random(200),
        pcg_exhaustive(6),
        pcg_random(20),
        nondraw_playouts(50),
        drawn_boards(),
    ):
        assert report.ok, report.line()


def test_injected_fault_is_caught():
    report = clip_sparsity_exhaustive(6, inject_fault=True)
    assert not report.ok and report.examples
