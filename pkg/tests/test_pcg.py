import random

import pytest

from starclip.graph import DuplicateEdge, WorkGraph, AdjacentPair, is_1_sparse
from starclip.harness import ExhaustivePcg, all_graphs, fg_sparse_graphs, play_pcg, random_fg_sparse
from starclip.pcg import (
    PASS,
    AddEdge,
    ClipPair,
    Phase,
    RoundRecord,
    Snapshot,
    WrongPhase,
    choose_branch,
    greedy_clip_move,
    legal_clips,
    monitor_claims,
    pcg_apply_pi,
    pcg_apply_pii,
    pcg_new,
    play_round,
    r_bound,
    transcript,
)


@pytest.mark.parametrize("v,target", [(5, 2), (6, 2), (2, 0), (3, 1)])
def test_target(v, target):
    assert pcg_new(WorkGraph(v)).target == target


def test_single_vertex_is_immediate_win():
    s = pcg_new(WorkGraph(1))
    assert s.phase is Phase.FINISHED and s.won


def test_pi_moves():
    s = pcg_new(WorkGraph(5))
    pcg_apply_pi(s, PASS)
    assert s.graph.edge_count == 0 and s.phase is Phase.AWAITING_PII
    s = pcg_new(WorkGraph(5))
    pcg_apply_pi(s, AddEdge(0, 1))
    assert s.graph.edge_count == 1
    with pytest.raises(WrongPhase):
        pcg_apply_pi(s, PASS)


def test_duplicate_add_rejected():
    s = pcg_new(WorkGraph.from_edges(5, [(0, 1)]))
    with pytest.raises(DuplicateEdge):
        pcg_apply_pi(s, AddEdge(0, 1))


def test_clip_moves():
    s = pcg_new(WorkGraph(5))
    pcg_apply_pi(s, AddEdge(0, 1))
    pcg_apply_pii(s, ClipPair(0, 2))
    assert s.graph.active_count() == 3 and s.graph.edge_count == 0


def test_clip_adjacent_rejected():
    s = pcg_new(WorkGraph.from_edges(5, [(0, 1)]))
    pcg_apply_pi(s, PASS)
    with pytest.raises(AdjacentPair):
        pcg_apply_pii(s, ClipPair(0, 1))


def test_two_passes_win():
    s = pcg_new(WorkGraph(5))
    pcg_apply_pi(s, PASS)
    pcg_apply_pii(s, ClipPair(0, 1))
    pcg_apply_pi(s, PASS)
    pcg_apply_pii(s, ClipPair(2, 3))
    assert s.phase is Phase.FINISHED and s.won


def test_small_graph_uses_base_rule():
    s = pcg_new(WorkGraph(5))
    pcg_apply_pi(s, AddEdge(0, 1))
    assert greedy_clip_move(s) == ClipPair(0, 2) and s.pending_branch == 1


def test_nice_pair_branch():
    s = pcg_new(WorkGraph(20))
    pcg_apply_pi(s, AddEdge(0, 1))
    assert greedy_clip_move(s) == ClipPair(0, 2) and s.pending_branch == 4


def test_max_degree_branch():
    s = pcg_new(WorkGraph.from_edges(20, [(0, i) for i in range(1, 10)]))
    pcg_apply_pi(s, AddEdge(10, 11))
    assert greedy_clip_move(s) == ClipPair(0, 10) and s.pending_branch == 5


@pytest.mark.parametrize(
    "edges,v,branch",
    [
        ([(0, 1)], 8, 1),
        ([(0, 1), (0, 2)], 6, 2),
        ([(0, 1), (0, 2), (0, 3)], 8, 3),
        ([(0, 1), (0, 2), (1, 2)], 4, 5),
        ([], 12, 4),
    ],
)
def test_branch_dispatch(edges, v, branch):
    assert choose_branch(WorkGraph.from_edges(v, edges)) == branch


def test_final_round_needs_search():
    # clipping the PI edge's lower endpoint would strand edge 2-3
    s = pcg_new(WorkGraph.from_edges(4, [(2, 3)]))
    play_round(s, PASS)
    assert s.won


def test_exhaustive_small_sparse_graphs():
    solver = ExhaustivePcg()
    for v in range(1, 7):
        for g in fg_sparse_graphs(v):
            assert solver.wins(g), g.literal()


def test_exhaustive_small_1_sparse_graphs():
    # base-case rules cover average-degree-1 graphs beyond the sparse family
    solver = ExhaustivePcg()
    for v in range(5, 8):
        for g in all_graphs(v, max_edges=v // 2):
            if is_1_sparse(g):
                assert solver.wins(g), g.literal()


def test_exhaustive_detects_a_lost_start():
    assert not ExhaustivePcg().wins(WorkGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)]))


@pytest.mark.parametrize("v", [10, 20, 40, 41])
@pytest.mark.parametrize("adversary", ["random", "pass", "attacker"])
def test_random_starts_are_won_silently(v, adversary):
    rng = random.Random(v)
    for i in range(10):
        g = random_fg_sparse(v, rng, heavy=i % 2 == 0)
        s, violations = play_pcg(g, adversary, seed=i)
        assert s.won and violations == [] and monitor_claims(s.history) == []


def test_monitor_empty_history():
    assert monitor_claims([]) == []


def test_monitor_flags_non_max_clip():
    # star with center 0: clipping two leaves in a max-degree round
    pre = WorkGraph.from_edges(12, [(0, i) for i in range(1, 8)])
    post = pre.copy().clip_pair(8, 9)
    rec = RoundRecord(
        pi=PASS,
        pii=ClipPair(8, 9),
        pre=Snapshot.of(pre),
        mid=Snapshot.of(pre),
        post=Snapshot.of(post),
        branch=5,
    )
    out = monitor_claims([rec])
    assert any("edge-drop" in m for m in out)


def test_monitor_flags_degree_jump():
    pre = WorkGraph(12)
    mid = WorkGraph.from_edges(12, [(0, 1), (0, 2)])
    rec = RoundRecord(PASS, ClipPair(3, 4), Snapshot.of(pre), Snapshot.of(mid), Snapshot.of(mid), branch=4)
    assert any("degree-step" in m for m in monitor_claims([rec]))


def test_r_bound():
    assert [r_bound(n) for n in (1, 4, 5, 9, 41)] == [0, 0, 1, 2, 10]


def test_transcript_shape():
    g = WorkGraph(7)
    s, v = play_pcg(g, "random", seed=3)
    t = transcript(g, s, v)
    assert t["won"] and t["initial_graph"] == "v=7; edges="
    assert len(t["rounds"]) == 3 and all(set(r) == {"pi", "pii", "branch"} for r in t["rounds"])


def test_legal_clips_excludes_edges():
    g = WorkGraph.from_edges(3, [(0, 1)])
    assert legal_clips(g) == [(0, 2), (1, 2)]
