"""Game runners, transcripts, and batch execution."""

from __future__ import annotations

import json
import multiprocessing
import random
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

from starclip.adversaries import AdversaryError, AdversaryPolicy
from starclip.graph import DEFAULT_PROFILE, SparseProfile, WorkGraph, fg_sparse_counts
from starclip.pcg import (
    PASS,
    AddEdge,
    NoLegalMove,
    PcgState,
    PiMove,
    all_pi_moves,
    greedy_clip_move,
    monitor_claims,
    pcg_apply_pi,
    pcg_apply_pii,
    pcg_new,
    Phase,
    transcript as pcg_transcript,
)
from starclip.rules import Player, apply_move, ex_bound, fmt_edge, new_game, parse_edge, replay
from starclip.strategy import BuilderStrategy, MonitorLevel, MonitorViolation, StrategyStuck

TRANSCRIPT_VERSION = 1
STRATEGY_ID = "layered-clipping"


@dataclass(frozen=True)
class GameSpec:
    n: int
    k: int
    adversary: str
    monitor: str = "assert"


def play_game(spec: GameSpec) -> dict:
    """Strategy (PII) against one adversary (PI); returns the transcript."""
    n, k = spec.n, spec.k
    policy = AdversaryPolicy.parse(spec.adversary)
    gs = new_game(n, k)
    strat = BuilderStrategy(n, k, MonitorLevel(spec.monitor))
    moves = []
    error = None
    gamma_bound_ok = True
    try:
        while gs.status.ongoing:
            if gs.to_move is Player.PI:
                e = policy.next_move(gs)
                moves.append({"player": "PI", "edge": fmt_edge(e)})
            else:
                e = strat.choose(gs)
                moves.append({"player": "PII", "edge": fmt_edge(e), "annotation": dict(strat.annotation)})
            apply_move(gs, e)
            if gs.status.ongoing and gs.gamma_max_degree() > 2 * k:
                gamma_bound_ok = False
    except (StrategyStuck, MonitorViolation, AdversaryError) as exc:
        error = f"{type(exc).__name__}: {exc}"
    st = gs.status
    violations = list(strat.violations)
    if not gamma_bound_ok:
        violations.append("union graph exceeded max degree 2k before the game ended")
    outcome = st.outcome.value if st.outcome else None
    endgame = None
    if strat.endgame is not None:
        eg = strat.endgame
        endgame = {
            "e1": fmt_edge(eg.e1),
            "e2": fmt_edge(eg.e2),
            "pi_safe": [fmt_edge(e) for e in eg.pi_safe],
        }
    return {
        "version": TRANSCRIPT_VERSION,
        "n": n,
        "k": k,
        "strategy": STRATEGY_ID,
        "adversary": policy.spec(),
        "seed": policy.seed,
        "guaranteed": strat.guaranteed,
        "unguaranteed": not strat.guaranteed,
        "moves": moves,
        "outcome": outcome,
        "losing_move_index": st.losing_move_index,
        "pii_edges": gs.move_count(Player.PII),
        "pii_max_degree": gs.max_degree(Player.PII),
        "claim_reached": strat.claim_reached,
        "endgame": endgame,
        "monitor_violations": violations,
        "error": error,
        "config": asdict(spec),
    }


def dumps(t: dict) -> str:
    return json.dumps(t, sort_keys=True, separators=(",", ":"))


def replay_transcript(t: dict) -> dict:
    """Replay the moves through the rules engine and re-derive the outcome."""
    gs = replay(t["n"], t["k"], [parse_edge(m["edge"]) for m in t["moves"]])
    st = gs.status
    return {
        "outcome": st.outcome.value if st.outcome else None,
        "losing_move_index": st.losing_move_index,
    }


def run_games(specs: list[GameSpec], workers: int = 1) -> list[str]:
    """JSONL lines in spec order; identical for any worker count."""
    if workers <= 1:
        return [dumps(play_game(s)) for s in specs]
    with multiprocessing.get_context("spawn").Pool(workers) as pool:
        return pool.map(_play_line, specs, chunksize=max(1, len(specs) // (4 * workers)))


def _play_line(spec: GameSpec) -> str:
    return dumps(play_game(spec))


def fixture_scripts(n: int, k: int) -> list[str]:
    """Scripted PI openings (falling back to safe-random once exhausted)."""
    matching = "+".join(f"{2 * i}-{2 * i + 1}" for i in range(n // 2))
    crossed = "+".join(f"{i}-{n - 1 - i}" for i in range(n // 2))
    if k >= 2:
        path = "+".join(f"{i}-{i + 1}" for i in range(n - 1))
    else:
        path = "+".join(f"{i}-{i + 2}" for i in range(0, n - 2, 4))
    # concentrate on the first few vertices: the strategy's favourite clips
    low = "+".join(f"{u}-{v}" for u in range(6) for v in range(u + 1, 12))
    return [
        f"replay:{i}:fallback=1,script={s}" for i, s in enumerate((matching, crossed, path, low))
    ]


def acceptance_specs(n: int, k: int, counts: Optional[dict] = None, monitor: str = "assert") -> list[GameSpec]:
    counts = counts or {"random": 200, "safe-random": 50, "s-attacker": 50, "degree-attacker": 50}
    specs = []
    for name, c in counts.items():
        specs.extend(GameSpec(n, k, f"{name}:{seed}", monitor) for seed in range(c))
    specs.extend(GameSpec(n, k, f, monitor) for f in fixture_scripts(n, k))
    return specs


@dataclass
class Summary:
    games: int = 0
    outcomes: dict = field(default_factory=dict)
    violations: int = 0
    errors: int = 0
    late_losses: int = 0
    pii_losses: int = 0

    def add(self, t: dict) -> None:
        self.games += 1
        key = t["outcome"] or "unfinished"
        self.outcomes[key] = self.outcomes.get(key, 0) + 1
        self.violations += len(t["monitor_violations"])
        self.errors += t["error"] is not None
        if t["outcome"] != "PIIWin":
            self.pii_losses += 1
        elif t["losing_move_index"] > ex_bound(t["n"], t["k"]) + 1:
            self.late_losses += 1

    @property
    def clean(self) -> bool:
        return self.games > 0 and self.pii_losses == 0 and self.violations == 0 and self.errors == 0 and self.late_losses == 0


def summarize(lines: Iterable[str]) -> Summary:
    s = Summary()
    for line in lines:
        s.add(json.loads(line))
    return s


# -- pair clipping game runs -------------------------------------------------


def random_fg_sparse(v: int, rng: random.Random, heavy: bool = False,
                     p: SparseProfile = DEFAULT_PROFILE) -> WorkGraph:
    """Random (f,g)-sparse graph; ``heavy`` puts a near-maximum star first."""
    g = WorkGraph(v)
    e_max = v * (p.alpha_num * v + p.alpha_den) // (2 * p.alpha_den)
    d_max = (v - 1) // 2
    target = rng.randint(0, e_max)
    if heavy and v >= 3 and d_max >= 1:
        c = rng.randrange(v)
        others = [w for w in range(v) if w != c]
        for w in rng.sample(others, min(d_max, target, len(others))):
            g.add_edge(c, w)
    attempts = 0
    while g.edge_count < target and attempts < 50 * v:
        attempts += 1
        a, b = rng.sample(range(v), 2)
        if g.has_edge(a, b) or g.adj[a].bit_count() >= d_max or g.adj[b].bit_count() >= d_max:
            continue
        g.add_edge(a, b)
    assert fg_sparse_counts(v, g.edge_count, g.max_degree(), p)
    return g


PCG_ADVERSARIES = ("random", "pass", "attacker")


def pcg_adversary_move(name: str, s: PcgState, rng: random.Random) -> PiMove:
    g = s.graph
    verts = g.vertices()
    if name == "pass" or len(verts) < 2:
        return PASS
    missing = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1:] if not g.has_edge(u, v)]
    if not missing:
        return PASS
    if name == "random":
        if rng.random() < 0.1:
            return PASS
        u, v = rng.choice(missing)
        return AddEdge(u, v)
    if name == "attacker":
        # grow the current maximum degree, joining two high-degree vertices
        deg = {x: g.adj[x].bit_count() for x in verts}
        u, v = max(missing, key=lambda e: (max(deg[e[0]], deg[e[1]]), min(deg[e[0]], deg[e[1]]), rng.random()))
        return AddEdge(u, v)
    raise ValueError(f"unknown PCG adversary {name!r}")


def play_pcg(g: WorkGraph, adversary: str, seed: int) -> tuple[PcgState, list[str]]:
    rng = random.Random(seed)
    s = pcg_new(g)
    while s.phase is not Phase.FINISHED:
        pcg_apply_pi(s, pcg_adversary_move(adversary, s, rng))
        try:
            clip = greedy_clip_move(s)
        except NoLegalMove:
            s.phase, s.won = Phase.FINISHED, False
            break
        pcg_apply_pii(s, clip)
    return s, monitor_claims(s.history)


def pcg_record(g: WorkGraph, adversary: str, seed: int) -> dict:
    s, violations = play_pcg(g, adversary, seed)
    rec = pcg_transcript(g, s, violations)
    rec["adversary"] = adversary
    rec["seed"] = seed
    return rec


def _compress(g: WorkGraph) -> tuple:
    """Order-preserving relabeling of the active vertices to 0..v-1."""
    verts = g.vertices()
    pos = {x: i for i, x in enumerate(verts)}
    return (len(verts), tuple(sorted((pos[u], pos[v]) for u, v in g.edges())))


class ExhaustivePcg:
    """Does the greedy clipper beat every adder sequence from a given graph?

    Memoized on the order-preserving compression of the pre-round graph; the
    clipper's choices depend only on vertex order, so this is exact.
    """

    def __init__(self) -> None:
        self.memo: dict = {}
        self.rounds = 0

    def wins(self, g: WorkGraph) -> bool:
        if g.active_count() <= 2:
            return g.edge_count == 0
        key = _compress(g)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = True
        for m in all_pi_moves(g):
            self.rounds += 1
            s = pcg_new(g)
            pcg_apply_pi(s, m)
            try:
                clip = greedy_clip_move(s)
            except NoLegalMove:
                result = False
                break
            after = s.graph.copy().clip_pair(clip.u, clip.v)
            if not self.wins(after):
                result = False
                break
        self.memo[key] = result
        return result

    def counterexample(self, g: WorkGraph) -> list[str]:
        """An adder line that beats the clipper, as move strings."""
        line = []
        while g.active_count() > 2:
            for m in all_pi_moves(g):
                s = pcg_new(g)
                pcg_apply_pi(s, m)
                try:
                    clip = greedy_clip_move(s)
                except NoLegalMove:
                    return line + [repr(m), "no legal clip"]
                after = s.graph.copy().clip_pair(clip.u, clip.v)
                if not self.wins(after):
                    line.append(f"{m!r} -> {clip.pair()}")
                    g = after
                    break
            else:
                return line
        return line


def all_graphs(v: int, max_edges: Optional[int] = None, max_degree: Optional[int] = None):
    """Every labeled graph on v vertices within the edge and degree caps."""
    pairs = [(a, b) for a in range(v) for b in range(a + 1, v)]
    cap_e = len(pairs) if max_edges is None else max_edges
    cap_d = v if max_degree is None else max_degree
    deg = [0] * v
    chosen: list = []

    def rec(i: int):
        if i == len(pairs):
            yield WorkGraph.from_edges(v, chosen)
            return
        yield from rec(i + 1)
        a, b = pairs[i]
        if len(chosen) < cap_e and deg[a] < cap_d and deg[b] < cap_d:
            deg[a] += 1
            deg[b] += 1
            chosen.append((a, b))
            yield from rec(i + 1)
            chosen.pop()
            deg[a] -= 1
            deg[b] -= 1

    yield from rec(0)


def fg_sparse_graphs(v: int, p: SparseProfile = DEFAULT_PROFILE):
    e_max = v * (p.alpha_num * v + p.alpha_den) // (2 * p.alpha_den)
    d_max = (v - 1) // 2 if p.include_f else v
    yield from all_graphs(v, e_max, d_max)

