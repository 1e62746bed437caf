"""Property suites: exhaustive small cases plus seeded random large cases."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from starclip.graph import (
    DEFAULT_PROFILE,
    SparseProfile,
    WorkGraph,
    find_nice_pair,
    g_sparse_counts,
    is_g_sparse,
)
from starclip.harness import ExhaustivePcg, PCG_ADVERSARIES, all_graphs, fg_sparse_graphs, play_pcg, random_fg_sparse
from starclip.rules import Player, apply_move, new_game
from starclip.solver import draw_reachable, solve


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: int = 0
    examples: list[str] = field(default_factory=list)
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.checked > 0

    def fail(self, msg: str) -> None:
        self.failures += 1
        if len(self.examples) < 5:
            self.examples.append(msg)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in self.detail.items())
        return f"{status} {self.name}: checked={self.checked} failures={self.failures}{extra} ({self.seconds:.1f}s)"


def _timed(fn: Callable[..., SuiteReport]) -> Callable[..., SuiteReport]:
    def wrapper(*args, **kwargs) -> SuiteReport:
        t0 = time.perf_counter()
        r = fn(*args, **kwargs)
        r.seconds = time.perf_counter() - t0
        return r

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- nice pairs ---------------------------------------------------------------


def degree_sorted_graphs(v: int, max_degree: int):
    """Labeled graphs with d(0) >= d(1) >= ... ; one per isomorphism class at least."""
    adj = [0] * v
    deg = [0] * v

    def row(u: int, w: int):
        # decide edges (u, w), (u, w+1), ... then move on to row u+1
        if w == v:
            if u > 0 and deg[u] > deg[u - 1]:
                return
            if u + 1 >= v - 1:
                if v >= 2 and u + 1 == v - 1 and deg[v - 1] > deg[v - 2]:
                    return
                g = WorkGraph(v)
                g.adj = list(adj)
                g.edge_count = sum(deg) // 2
                yield g
                return
            yield from row(u + 1, u + 2)
            return
        yield from row(u, w + 1)
        if deg[u] < max_degree and deg[w] < max_degree:
            adj[u] |= 1 << w
            adj[w] |= 1 << u
            deg[u] += 1
            deg[w] += 1
            yield from row(u, w + 1)
            adj[u] &= ~(1 << w)
            adj[w] &= ~(1 << u)
            deg[u] -= 1
            deg[w] -= 1

    if v <= 1:
        yield WorkGraph(v)
        return
    yield from row(0, 1)


@_timed
def nice_pair_exhaustive(max_v: int = 8) -> SuiteReport:
    """Every graph with 2*max_degree <= v - 2 has a nice pair (v <= max_v)."""
    r = SuiteReport("nice-pair-exhaustive")
    for v in range(2, max_v + 1):
        cap = (v - 2) // 2
        count = 0
        for g in degree_sorted_graphs(v, cap):
            count += 1
            if find_nice_pair(g) is None:
                r.fail(g.literal())
        r.detail[f"v{v}"] = count
        r.checked += count
    return r


def random_bounded_graph(v: int, rng: random.Random, cap: int) -> WorkGraph:
    g = WorkGraph(v)
    target = rng.randint(0, v * cap // 2)
    attempts = 0
    while g.edge_count < target and attempts < 20 * v * max(cap, 1):
        attempts += 1
        a, b = rng.sample(range(v), 2)
        if g.has_edge(a, b) or g.adj[a].bit_count() >= cap or g.adj[b].bit_count() >= cap:
            continue
        g.add_edge(a, b)
    return g


@_timed
def nice_pair_random(count: int = 10_000, seed: int = 2, v_range: tuple[int, int] = (9, 40)) -> SuiteReport:
    r = SuiteReport("nice-pair-random")
    rng = random.Random(seed)
    for _ in range(count):
        v = rng.randint(*v_range)
        g = random_bounded_graph(v, rng, (v - 2) // 2)
        r.checked += 1
        if find_nice_pair(g) is None:
            r.fail(g.literal())
    return r


# -- clipping a qualifying pair keeps g-sparseness -----------------------------


def _clip_cases(g: WorkGraph, check_precondition: bool = True):
    """(G', u, v) for every G' = G plus at most one edge and qualifying pair."""
    v_g, e_g = g.active_count(), g.edge_count
    verts = g.vertices()
    missing = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:] if not g.has_edge(a, b)]
    for extra in [None] + missing:
        gp = g.copy()
        if extra is not None:
            gp.add_edge(*extra)
        for i, a in enumerate(verts):
            for b in verts[i + 1:]:
                if gp.has_edge(a, b):
                    continue
                s = gp.adj[a].bit_count() + gp.adj[b].bit_count()
                if check_precondition and v_g * s < 4 * e_g:
                    continue
                yield gp, a, b


def _clip_check(r: SuiteReport, g: WorkGraph, gp: WorkGraph, a: int, b: int, p: SparseProfile) -> None:
    r.checked += 1
    after = gp.copy().clip_pair(a, b)
    if not is_g_sparse(after, p):
        r.fail(f"{g.literal()} + edge -> {gp.literal()}, clip ({a},{b})")


@_timed
def clip_sparsity_exhaustive(max_v: int = 7, p: SparseProfile = DEFAULT_PROFILE, inject_fault: bool = False) -> SuiteReport:
    """All g-sparse G with 4 <= v <= max_v, all one-edge extensions and pairs."""
    r = SuiteReport("clip-sparsity-exhaustive" + ("-faulty" if inject_fault else ""))
    for v in range(4, max_v + 1):
        e_max = v * (p.alpha_num * v + p.alpha_den) // (2 * p.alpha_den)
        graphs = 0
        for g in all_graphs(v, e_max):
            graphs += 1
            for gp, a, b in _clip_cases(g, check_precondition=not inject_fault):
                _clip_check(r, g, gp, a, b, p)
        r.detail[f"graphs_v{v}"] = graphs
    return r


def random_g_sparse(v: int, rng: random.Random, p: SparseProfile = DEFAULT_PROFILE) -> WorkGraph:
    """Random g-sparse graph, biased towards the edge-count boundary."""
    e_max = v * (p.alpha_num * v + p.alpha_den) // (2 * p.alpha_den)
    target = e_max if rng.random() < 0.5 else rng.randint(0, e_max)
    g = WorkGraph(v)
    while g.edge_count < min(target, v * (v - 1) // 2):
        a, b = rng.sample(range(v), 2)
        if not g.has_edge(a, b):
            g.add_edge(a, b)
    return g


@_timed
def clip_sparsity_random(count: int = 10_000, seed: int = 3, v_range: tuple[int, int] = (8, 80),
                  p: SparseProfile = DEFAULT_PROFILE) -> SuiteReport:
    r = SuiteReport("clip-sparsity-random")
    rng = random.Random(seed)
    while r.checked < count:
        v = rng.randint(*v_range)
        g = random_g_sparse(v, rng, p)
        gp = g.copy()
        if rng.random() < 0.8:
            for _ in range(100):
                a, b = rng.sample(range(v), 2)
                if not gp.has_edge(a, b):
                    gp.add_edge(a, b)
                    break
        v_g, e_g = g.active_count(), g.edge_count
        pairs = []
        for a in range(v):
            for b in range(a + 1, v):
                if not gp.has_edge(a, b):
                    s = gp.adj[a].bit_count() + gp.adj[b].bit_count()
                    if v_g * s >= 4 * e_g:
                        pairs.append((s, a, b))
        if not pairs:
            continue
        # prefer pairs closest to the threshold
        pairs.sort()
        s, a, b = pairs[0] if rng.random() < 0.5 else rng.choice(pairs)
        _clip_check(r, g, gp, a, b, p)
    return r


# -- clipping game -------------------------------------------------------------


@_timed
def pcg_exhaustive(max_v: int = 8) -> SuiteReport:
    """Greedy clipper beats every adder line from every (f,g)-sparse graph."""
    r = SuiteReport("pcg-exhaustive")
    solver = ExhaustivePcg()
    for v in range(1, max_v + 1):
        graphs = 0
        for g in fg_sparse_graphs(v):
            graphs += 1
            r.checked += 1
            if not solver.wins(g):
                r.fail(f"{g.literal()}: {solver.counterexample(g)}")
        r.detail[f"graphs_v{v}"] = graphs
    r.detail["rounds"] = solver.rounds
    return r


@_timed
def pcg_random(count: int = 1000, seed: int = 5, sizes: tuple[int, ...] = (10, 20, 40)) -> SuiteReport:
    """Random (f,g)-sparse starts against random/attacking/passing adders."""
    r = SuiteReport("pcg-random")
    rng = random.Random(seed)
    branches: dict[int, int] = {}
    for v in sizes:
        for i in range(count):
            g = random_fg_sparse(v, rng, heavy=i % 2 == 1)
            adversary = PCG_ADVERSARIES[i % len(PCG_ADVERSARIES)]
            s, violations = play_pcg(g, adversary, rng.randrange(2**32))
            r.checked += 1
            for rec in s.history:
                branches[rec.branch] = branches.get(rec.branch, 0) + 1
            if not s.won or violations:
                r.fail(f"v={v} {adversary}: won={s.won} {violations[:2]} start={g.literal()}")
    r.detail["branches"] = "/".join(f"{b}:{branches[b]}" for b in sorted(branches))
    return r


# -- whole-game playouts ---------------------------------------------------------


def random_playout(n: int, k: int, rng: random.Random) -> tuple[Optional[Player], bool]:
    """Uniformly random complete game; returns (loser, union max degree stayed <= 2k)."""
    gs = new_game(n, k)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rng.shuffle(edges)
    bounded = True
    for e in edges:
        apply_move(gs, e)
        if not gs.status.ongoing:
            break
        if gs.gamma_max_degree() > 2 * k:
            bounded = False
    return gs.status.loser, bounded


@_timed
def nondraw_playouts(count: int = 1000, seed: int = 7,
                     boards: tuple[tuple[int, int], ...] = ((1, 4), (2, 6), (3, 8), (1, 30))) -> SuiteReport:
    r = SuiteReport("nondraw-playouts")
    rng = random.Random(seed)
    for k, n in boards:
        for _ in range(count):
            loser, bounded = random_playout(n, k, rng)
            r.checked += 1
            if loser is None and n >= 2 * k + 2:
                r.fail(f"draw on (k={k}, n={n})")
            if not bounded:
                r.fail(f"union max degree above 2k on (k={k}, n={n})")
    return r


@_timed
def drawn_boards(boards: tuple[tuple[int, int], ...] = ((2, 1), (3, 2))) -> SuiteReport:
    """Boards with n < 2k+2 admit a drawn play; the solver confirms."""
    r = SuiteReport("drawn-boards")
    for n, k in boards:
        r.checked += 1
        line = draw_reachable(n, k)
        res = solve(n, k)
        r.detail[f"({n},{k})"] = res.outcome.value if res.outcome else "?"
        if line is None:
            r.fail(f"no drawn play on (n={n}, k={k})")
    return r


SUITES = {
    "nice-pair": lambda o: [nice_pair_exhaustive(o.get("exhaustive_max", 8)), nice_pair_random(o.get("random_count", 10_000))],
    "clip-sparsity": lambda o: [clip_sparsity_exhaustive(min(o.get("exhaustive_max", 7), 7), inject_fault=o.get("inject_fault", False)),
                         clip_sparsity_random(o.get("random_count", 10_000))],
    "pcg": lambda o: [pcg_exhaustive(o.get("exhaustive_max", 8)), pcg_random(o.get("pcg_count", 1000))],
    "nondraw": lambda o: [nondraw_playouts(o.get("playouts", 1000)), drawn_boards()],
}


def run_suites(only: Optional[list[str]] = None, **options) -> list[SuiteReport]:
    names = only or list(SUITES)
    reports = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        reports.extend(SUITES[name](options))
    return reports


def g_sparse_boundary(v: int, p: SparseProfile = DEFAULT_PROFILE) -> int:
    """Largest edge count that is still g-sparse on v vertices."""
    e = v * (p.alpha_num * v + p.alpha_den) // (2 * p.alpha_den)
    assert g_sparse_counts(v, e, p) and not g_sparse_counts(v, e + 1, p)
    return e
