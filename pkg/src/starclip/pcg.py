"""Pair clipping game: state machine, greedy clipping strategy, round monitors.

A round is: the adder (PI) adds at most one missing edge, then the clipper
(PII) removes two non-adjacent vertices.  The clipper wins after
``(v - 1) // 2`` clips if no edge is left.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Union

from starclip.graph import (
    DEFAULT_PROFILE,
    Pair,
    SparseProfile,
    WorkGraph,
    fg_sparse_counts,
    find_nice_pair,
    g_sparse_counts,
    is_1_sparse,
    is_11_sparse,
    iter_bits,
    norm,
)


class PcgError(RuntimeError):
    pass


class WrongPhase(PcgError):
    pass


class NoLegalMove(PcgError):
    pass


@dataclass(frozen=True)
class AddEdge:
    u: int
    v: int

    def pair(self) -> Pair:
        return norm(self.u, self.v)


@dataclass(frozen=True)
class Pass:
    pass


PASS = Pass()
PiMove = Union[AddEdge, Pass]


@dataclass(frozen=True)
class ClipPair:
    u: int
    v: int

    def pair(self) -> Pair:
        return norm(self.u, self.v)


class Phase(enum.Enum):
    AWAITING_PI = "awaiting_pi"
    AWAITING_PII = "awaiting_pii"
    FINISHED = "finished"


@dataclass(frozen=True)
class Snapshot:
    v: int
    e: int
    delta: int

    @classmethod
    def of(cls, g: WorkGraph) -> "Snapshot":
        return cls(g.active_count(), g.edge_count, g.max_degree())

    def g_sparse(self, p: SparseProfile = DEFAULT_PROFILE) -> bool:
        return g_sparse_counts(self.v, self.e, p)

    def fg_sparse(self, p: SparseProfile = DEFAULT_PROFILE) -> bool:
        return fg_sparse_counts(self.v, self.e, self.delta, p)


@dataclass(frozen=True)
class RoundRecord:
    """One completed round: graph before PI, after PI, after the clip."""

    pi: PiMove
    pii: ClipPair
    pre: Snapshot
    mid: Snapshot
    post: Snapshot
    branch: int = 0
    # degrees in the post-PI graph of the clipped pair, and the max degree there
    clip_degrees: tuple[int, int] = (0, 0)


@dataclass
class PcgState:
    graph: WorkGraph
    initial_v: int
    target: int
    pii_moves_made: int = 0
    phase: Phase = Phase.AWAITING_PI
    won: Optional[bool] = None
    pre_round: WorkGraph = None  # type: ignore[assignment]
    last_pi_move: Optional[PiMove] = None
    history: list[RoundRecord] = field(default_factory=list)
    # branch chosen by the strategy for the pending clip, if any
    pending_branch: int = 0


def pcg_new(g: WorkGraph) -> PcgState:
    g = g.copy()
    v = g.active_count()
    s = PcgState(graph=g, initial_v=v, target=max(0, (v - 1) // 2))
    s.pre_round = g.copy()
    if s.target == 0:
        s.phase = Phase.FINISHED
        s.won = g.edge_count == 0
    return s


def pcg_apply_pi(s: PcgState, m: PiMove) -> PcgState:
    if s.phase is not Phase.AWAITING_PI:
        raise WrongPhase(s.phase)
    if isinstance(m, AddEdge):
        s.graph.add_edge(m.u, m.v)
    s.last_pi_move = m
    s.phase = Phase.AWAITING_PII
    return s


def legal_clips(g: WorkGraph) -> list[Pair]:
    out = []
    for u in iter_bits(g.active):
        for v in iter_bits(g.active & ~g.adj[u] & ~((2 << u) - 1)):
            out.append((u, v))
    return out


def pcg_apply_pii(s: PcgState, m: ClipPair) -> PcgState:
    if s.phase is not Phase.AWAITING_PII:
        raise WrongPhase(s.phase)
    g = s.graph
    mid = Snapshot.of(g)
    du = g.degree(m.u) if g.is_active(m.u) else 0
    dv = g.degree(m.v) if g.is_active(m.v) else 0
    g.clip_pair(m.u, m.v)
    s.history.append(
        RoundRecord(
            pi=s.last_pi_move if s.last_pi_move is not None else PASS,
            pii=m,
            pre=Snapshot.of(s.pre_round),
            mid=mid,
            post=Snapshot.of(g),
            branch=s.pending_branch,
            clip_degrees=(du, dv),
        )
    )
    s.pending_branch = 0
    s.pii_moves_made += 1
    if s.pii_moves_made >= s.target:
        s.phase = Phase.FINISHED
        s.won = g.edge_count == 0
    else:
        s.phase = Phase.AWAITING_PI
        s.pre_round = g.copy()
    return s


def forfeit(s: PcgState) -> PcgState:
    """Clipper has no legal clip: the game is lost."""
    s.phase = Phase.FINISHED
    s.won = False
    return s


# -- greedy clipping strategy ------------------------------------------------

BRANCH_NAMES = {
    1: "max-degree-1 base",
    2: "small 1-sparse search",
    3: "1-sparse degree>=2",
    4: "nice pair",
    5: "max-degree clip",
}


def _partner(g: WorkGraph, u: int) -> int:
    cand = g.active & ~g.adj[u] & ~(1 << u)
    if not cand:
        raise NoLegalMove(f"vertex {u} is adjacent to every other active vertex")
    return (cand & -cand).bit_length() - 1


def _first_clip(g: WorkGraph, accept) -> Optional[Pair]:
    for u, v in legal_clips(g):
        h = g.copy().clip_pair(u, v)
        if accept(h):
            return (u, v)
    return None


def choose_branch(pre: WorkGraph, p: SparseProfile = DEFAULT_PROFILE) -> int:
    """Which rule the clipper uses, decided on the graph before PI's move.

    Orders below 10 use the max-degree-1 / average-degree-1 base rules;
    larger orders use nice pairs while the max degree is comfortably
    small, and max-degree clipping otherwise.
    """
    n = pre.active_count()
    if n < 10:
        if is_11_sparse(pre):
            return 1
        if is_1_sparse(pre):
            return 2 if n in (5, 6) else 3 if n >= 7 else 5
        return 5
    delta = pre.max_degree()
    if fg_sparse_counts(n, pre.edge_count, delta, p) and 2 * delta <= n - 5:
        return 4
    return 5


def greedy_clip_move(s: PcgState, p: SparseProfile = DEFAULT_PROFILE) -> ClipPair:
    """Clipper's reply for the current round (the PII winning strategy).

    Records the branch used on ``s.pending_branch`` so the next
    ``pcg_apply_pii`` stores it in the round history.
    """
    if s.phase is not Phase.AWAITING_PII:
        raise WrongPhase(s.phase)
    g = s.graph
    if g.active_count() < 2:
        raise NoLegalMove("fewer than two active vertices")
    branch = choose_branch(s.pre_round, p)
    pi = s.last_pi_move
    if branch == 1:
        if g.active_count() <= 4:
            # last round: any clip leaving no edge
            pair = _first_clip(g, lambda h: h.edge_count == 0)
        elif isinstance(pi, AddEdge):
            u = min(pi.u, pi.v)
            pair = (u, _partner(g, u))
        else:
            pair = None
        if pair is None:
            clips = legal_clips(g)
            if not clips:
                raise NoLegalMove("every active pair is adjacent")
            pair = clips[0]
    elif branch == 2:
        pair = _first_clip(g, is_11_sparse)
        if pair is None:
            raise NoLegalMove("no clip restores max degree <= 1")
    elif branch == 3:
        u = next((x for x in iter_bits(g.active) if g.adj[x].bit_count() >= 2), None)
        if u is None:
            raise NoLegalMove("no vertex of degree >= 2")
        pair = (u, _partner(g, u))
    elif branch == 4:
        pair = find_nice_pair(g)
        if pair is None:
            raise NoLegalMove("no nice pair")
    else:
        delta = g.max_degree()
        u = next(x for x in iter_bits(g.active) if g.adj[x].bit_count() == delta)
        pair = (u, _partner(g, u))
    s.pending_branch = branch
    u, v = norm(*pair)
    return ClipPair(u, v)


def play_round(s: PcgState, m: PiMove, p: SparseProfile = DEFAULT_PROFILE) -> ClipPair:
    pcg_apply_pi(s, m)
    try:
        clip = greedy_clip_move(s, p)
    except NoLegalMove:
        if not legal_clips(s.graph):
            forfeit(s)
        raise
    pcg_apply_pii(s, clip)
    return clip


# -- round monitors ----------------------------------------------------------


def r_bound(n: int) -> int:
    """Maximum length of a run of max-degree clips from a sparse start."""
    return (n - 1) // 4


def monitor_claims(history: list[RoundRecord], p: SparseProfile = DEFAULT_PROFILE) -> list[str]:
    """Check the per-round degree/edge invariants of a greedy-clipper game.

    Returns human-readable violation strings; empty means all held.
    """
    out = []
    run_start: Optional[int] = None
    run_len = 0
    for j, r in enumerate(history):
        pre, mid, post = r.pre, r.mid, r.post
        if not (pre.delta <= mid.delta <= pre.delta + 1):
            out.append(f"round {j}: degree-step: max degree {pre.delta} -> {mid.delta} after PI move")
        if r.branch == 5:
            if post.e > mid.e - mid.delta:
                out.append(f"round {j}: edge-drop: e {mid.e} -> {post.e} with max degree {mid.delta}")
            if post.delta > pre.delta:
                out.append(f"round {j}: degree-rise: max degree rose {pre.delta} -> {post.delta}")
        if r.branch in (4, 5) and not pre.g_sparse(p):
            out.append(f"round {j}: sparse-start: pre-round graph (v={pre.v}, e={pre.e}) not g-sparse")
        if r.branch == 4 and not post.g_sparse(p):
            out.append(f"round {j}: nice-pair clip left (v={post.v}, e={post.e}) not g-sparse")
        # runs of max-degree clips starting from an (f,g)-sparse graph
        if r.branch == 5 and pre.fg_sparse(p):
            run_start, run_len = pre.v, 1
        elif r.branch == 5 and run_start is not None:
            run_len += 1
        else:
            run_start, run_len = None, 0
        if run_start is not None and run_len > r_bound(run_start):
            out.append(f"round {j}: max-degree run of {run_len} exceeds r({run_start})={r_bound(run_start)}")
    return out


def transcript(initial: WorkGraph, s: PcgState, violations: list[str]) -> dict:
    rounds = []
    for r in s.history:
        pi = "pass" if isinstance(r.pi, Pass) else list(r.pi.pair())
        rounds.append({"pi": pi, "pii": list(r.pii.pair()), "branch": r.branch})
    return {
        "initial_graph": initial.literal(),
        "rounds": rounds,
        "won": bool(s.won),
        "violations": violations,
    }


def all_pi_moves(g: WorkGraph) -> list[PiMove]:
    moves: list[PiMove] = [PASS]
    for u, v in combinations(g.vertices(), 2):
        if not g.has_edge(u, v):
            moves.append(AddEdge(u, v))
    return moves
