"""Exact solver for small star avoidance boards.

Positions are pairs of edge bitmasks over the lexicographically ordered edges
of K_n.  Values are from the mover's point of view: +1 win, 0 draw, -1 loss.
A move that gives the mover a vertex of degree k+1 is resolved on the spot as
a loss, so stored positions always have both graphs of max degree <= k.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Optional

from starclip.graph import Pair
from starclip.rules import GameOver, Outcome, Player, StarState, apply_move, new_game


class SolverError(RuntimeError):
    pass


class BudgetExceeded(SolverError):
    def __init__(self, nodes: int, elapsed: float):
        super().__init__(f"budget exceeded after {nodes} nodes, {elapsed:.1f}s")
        self.nodes = nodes
        self.elapsed = elapsed


class ModeUnavailable(SolverError):
    pass


MODES = ("none", "full-permutation", "refinement-hash")


@dataclass(frozen=True)
class Budget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


DEFAULT_BUDGET = Budget(max_nodes=50_000_000, max_seconds=600.0)


# -- board geometry ----------------------------------------------------------


@dataclass(frozen=True)
class Board:
    n: int
    edges: tuple[Pair, ...]
    index: dict
    incident: tuple[int, ...]
    full: int


@lru_cache(maxsize=None)
def board(n: int) -> Board:
    edges = tuple(combinations(range(n), 2))
    index = {e: i for i, e in enumerate(edges)}
    inc = [0] * n
    for i, (u, v) in enumerate(edges):
        inc[u] |= 1 << i
        inc[v] |= 1 << i
    return Board(n, edges, index, tuple(inc), (1 << len(edges)) - 1)


@dataclass(frozen=True)
class Position:
    n: int
    k: int
    pi_edges: int = 0
    pii_edges: int = 0

    @property
    def to_move(self) -> Player:
        return Player.PI if self.pi_edges.bit_count() == self.pii_edges.bit_count() else Player.PII

    @classmethod
    def from_state(cls, gs: StarState) -> "Position":
        b = board(gs.n)
        masks = [0, 0]
        for p, e in gs.moves:
            masks[p] |= 1 << b.index[e]
        return cls(gs.n, gs.k, masks[0], masks[1])

    @classmethod
    def from_edges(cls, n: int, k: int, pi: Iterable[Pair], pii: Iterable[Pair]) -> "Position":
        b = board(n)
        m1 = sum(1 << b.index[tuple(sorted(e))] for e in pi)
        m2 = sum(1 << b.index[tuple(sorted(e))] for e in pii)
        return cls(n, k, m1, m2)

    def edge_list(self, mask: int) -> list[Pair]:
        b = board(self.n)
        return [b.edges[i] for i in range(len(b.edges)) if (mask >> i) & 1]

    def degrees(self, mask: int) -> list[int]:
        inc = board(self.n).incident
        return [(mask & inc[v]).bit_count() for v in range(self.n)]


# -- canonical keys ----------------------------------------------------------


def _vertex_rows(n: int, mask: int) -> list[int]:
    b = board(n)
    rows = [0] * n
    for i, (u, v) in enumerate(b.edges):
        if (mask >> i) & 1:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return rows


def refine(n: int, r1: list[int], r2: list[int]) -> list[int]:
    """Stable colour refinement of the two-coloured graph; colours are ints
    that are consistent across positions (isomorphism-invariant)."""
    colors = [hash((r1[v].bit_count(), r2[v].bit_count())) for v in range(n)]
    distinct = len(set(colors))
    while True:
        nxt = []
        for v in range(n):
            s1 = tuple(sorted(colors[w] for w in range(n) if (r1[v] >> w) & 1))
            s2 = tuple(sorted(colors[w] for w in range(n) if (r2[v] >> w) & 1))
            nxt.append(hash((colors[v], s1, s2)))
        colors = nxt
        d = len(set(colors))
        if d == distinct:
            return colors
        distinct = d


def _encode(n: int, mask: int, perm: tuple[int, ...]) -> int:
    b = board(n)
    idx = b.index
    out = 0
    m = mask
    while m:
        low = m & -m
        i = low.bit_length() - 1
        m ^= low
        u, v = b.edges[i]
        a, c = perm[u], perm[v]
        out |= 1 << idx[(a, c) if a < c else (c, a)]
    return out


def _class_perms(colors: list[int]) -> Iterable[tuple[int, ...]]:
    """All relabelings sending colour classes, in sorted colour order, to
    consecutive label blocks."""
    n = len(colors)
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(colors[v], []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    starts = []
    pos = 0
    for blk in blocks:
        starts.append(pos)
        pos += len(blk)
    for choice in product(*(permutations(blk) for blk in blocks)):
        perm = [0] * n
        for start, order in zip(starts, choice):
            for off, v in enumerate(order):
                perm[v] = start + off
        yield tuple(perm)


def canonicalize(p: Position, mode: str = "full-permutation"):
    """Key equal for positions related by a vertex relabeling.

    ``full-permutation`` returns an exact canonical form (minimum encoding
    over colour-respecting relabelings, which contain an isomorphism to
    every relabeled copy).  ``refinement-hash`` returns the refined colour
    histogram, which can collide; callers must confirm with
    :func:`isomorphic`.
    """
    if mode == "none":
        return (p.pi_edges, p.pii_edges)
    n = p.n
    if p.pi_edges == 0 and p.pii_edges == 0:
        return ("empty", n)
    r1, r2 = _vertex_rows(n, p.pi_edges), _vertex_rows(n, p.pii_edges)
    colors = refine(n, r1, r2)
    if mode == "refinement-hash":
        return ("wl", n, tuple(sorted(colors)))
    if mode != "full-permutation":
        raise ValueError(f"unknown mode {mode!r}")
    if n > 8:
        raise ModeUnavailable("full-permutation canonicalization needs n <= 8")
    best = None
    for perm in _class_perms(colors):
        key = (_encode(n, p.pi_edges, perm), _encode(n, p.pii_edges, perm))
        if best is None or key < best:
            best = key
    return best


def isomorphic(a: Position, b: Position) -> bool:
    if a.n != b.n or a.pi_edges.bit_count() != b.pi_edges.bit_count():
        return False
    if a.pii_edges.bit_count() != b.pii_edges.bit_count():
        return False
    n = a.n
    ar1, ar2 = _vertex_rows(n, a.pi_edges), _vertex_rows(n, a.pii_edges)
    br1, br2 = _vertex_rows(n, b.pi_edges), _vertex_rows(n, b.pii_edges)
    ca, cb = refine(n, ar1, ar2), refine(n, br1, br2)
    if sorted(ca) != sorted(cb):
        return False
    order = sorted(range(n), key=lambda v: ca[v])
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or cb[w] != ca[v]:
                continue
            ok = True
            for x in order[:i]:
                y = image[x]
                if ((ar1[v] >> x) & 1) != ((br1[w] >> y) & 1) or ((ar2[v] >> x) & 1) != ((br2[w] >> y) & 1):
                    ok = False
                    break
            if ok:
                image[v], used[w] = w, True
                if extend(i + 1):
                    return True
                image[v], used[w] = -1, False
        return False

    return extend(0)


# -- search ------------------------------------------------------------------


@dataclass
class SolveResult:
    outcome: Optional[Outcome]
    best_move: Optional[Pair] = None
    nodes: int = 0
    table_hits: int = 0
    elapsed: float = 0.0
    value: Optional[int] = None
    principal_variation: list[Pair] = field(default_factory=list)


class Solver:
    def __init__(self, n: int, k: int, mode: str = "full-permutation", budget: Budget = DEFAULT_BUDGET):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "full-permutation" and n > 8:
            raise ModeUnavailable("full-permutation canonicalization needs n <= 8")
        self.n, self.k, self.mode, self.budget = n, k, mode, budget
        self.board = board(n)
        self.table: dict = {}
        self.nodes = 0
        self.table_hits = 0
        self._t0 = time.perf_counter()

    def _tick(self) -> None:
        self.nodes += 1
        b = self.budget
        if b.max_nodes is not None and self.nodes > b.max_nodes:
            raise BudgetExceeded(self.nodes, time.perf_counter() - self._t0)
        if b.max_seconds is not None and self.nodes % 4096 == 0:
            if time.perf_counter() - self._t0 > b.max_seconds:
                raise BudgetExceeded(self.nodes, time.perf_counter() - self._t0)

    def _lookup(self, pi: int, pii: int):
        pos = Position(self.n, self.k, pi, pii)
        key = canonicalize(pos, self.mode)
        entry = self.table.get(key)
        if entry is None:
            return key, pos, None
        if self.mode == "refinement-hash":
            for exemplar, val in entry:
                if isomorphic(exemplar, pos):
                    return key, pos, val
            return key, pos, None
        return key, pos, entry

    def _store(self, key, pos: Position, val: int) -> None:
        if self.mode == "refinement-hash":
            self.table.setdefault(key, []).append((pos, val))
        else:
            self.table[key] = val

    def ordered_moves(self, pi: int, pii: int) -> tuple[list[int], list[int]]:
        """(safe, losing) edge indices for the mover, each in lexicographic order."""
        b = self.board
        mine = pi if pi.bit_count() == pii.bit_count() else pii
        free = b.full & ~(pi | pii)
        inc, k = b.incident, self.k
        full_v = 0
        for v in range(self.n):
            if (mine & inc[v]).bit_count() >= k:
                full_v |= inc[v]
        safe, losing = [], []
        m = free
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            (losing if (full_v >> i) & 1 else safe).append(i)
        return safe, losing

    def value(self, pi: int, pii: int) -> int:
        """Exact value for the player to move (position assumed live)."""
        self._tick()
        free = self.board.full & ~(pi | pii)
        if not free:
            return 0
        key, pos, cached = self._lookup(pi, pii)
        if cached is not None:
            self.table_hits += 1
            return cached
        pi_turn = pi.bit_count() == pii.bit_count()
        safe, _ = self.ordered_moves(pi, pii)
        best = -1
        for i in safe:
            bit = 1 << i
            v = -(self.value(pi | bit, pii) if pi_turn else self.value(pi, pii | bit))
            if v > best:
                best = v
                if best == 1:
                    break
        self._store(key, pos, best)
        return best

    def child_values(self, pi: int, pii: int) -> list[tuple[Pair, int]]:
        """Mover's value of every legal move, lexicographic order."""
        pi_turn = pi.bit_count() == pii.bit_count()
        safe, losing = self.ordered_moves(pi, pii)
        vals = {i: -1 for i in losing}
        for i in safe:
            bit = 1 << i
            vals[i] = -(self.value(pi | bit, pii) if pi_turn else self.value(pi, pii | bit))
        return [(self.board.edges[i], vals[i]) for i in sorted(vals)]

    def best(self, pi: int, pii: int) -> tuple[Pair, int]:
        scored = self.child_values(pi, pii)
        if not scored:
            raise GameOver("no moves left")
        top = max(v for _, v in scored)
        return next(e for e, v in scored if v == top), top


def _outcome(value: int) -> Outcome:
    return {1: Outcome.PI_WIN, 0: Outcome.DRAW, -1: Outcome.PII_WIN}[value]


def solve(n: int, k: int, budget: Budget = DEFAULT_BUDGET, mode: str = "full-permutation") -> SolveResult:
    """Classify the (k+1)-star avoidance game on K_n under optimal play."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if mode == "full-permutation" and n > 8:
        mode = "refinement-hash"
    t0 = time.perf_counter()
    s = Solver(n, k, mode, budget)
    if not s.board.edges:
        return SolveResult(Outcome.DRAW, None, 0, 0, 0.0, 0)
    val = s.value(0, 0)
    move, _ = s.best(0, 0)
    pv = principal_variation(s, 0, 0)
    return SolveResult(_outcome(val), move, s.nodes, s.table_hits, time.perf_counter() - t0, val, pv)


def principal_variation(s: Solver, pi: int, pii: int) -> list[Pair]:
    """Both sides play their lexicographically smallest optimal move."""
    pv = []
    k = s.k
    while s.board.full & ~(pi | pii):
        e, _ = s.best(pi, pii)
        pv.append(e)
        i = s.board.index[e]
        pi_turn = pi.bit_count() == pii.bit_count()
        mine = pi if pi_turn else pii
        u, v = e
        inc = s.board.incident
        lost = (mine & inc[u]).bit_count() >= k or (mine & inc[v]).bit_count() >= k
        if pi_turn:
            pi |= 1 << i
        else:
            pii |= 1 << i
        if lost:
            break
    return pv


def best_move(p: Position, budget: Budget = DEFAULT_BUDGET, mode: str = "full-permutation") -> Pair:
    """Lexicographically smallest move achieving the position's value."""
    b = board(p.n)
    for mask in (p.pi_edges, p.pii_edges):
        if any((mask & b.incident[v]).bit_count() > p.k for v in range(p.n)):
            raise GameOver("position already lost")
    if not b.full & ~(p.pi_edges | p.pii_edges):
        raise GameOver("board exhausted")
    if mode == "full-permutation" and p.n > 8:
        mode = "refinement-hash"
    s = Solver(p.n, p.k, mode, budget)
    return s.best(p.pi_edges, p.pii_edges)[0]


def position_value(p: Position, budget: Budget = DEFAULT_BUDGET, mode: str = "full-permutation") -> int:
    return Solver(p.n, p.k, mode, budget).value(p.pi_edges, p.pii_edges)


def draw_reachable(n: int, k: int) -> Optional[list[Pair]]:
    """Some complete play ending in a draw, found by depth-first search."""
    b = board(n)
    seen: set = set()

    def dfs(pi: int, pii: int) -> Optional[list[Pair]]:
        free = b.full & ~(pi | pii)
        if not free:
            return []
        if (pi, pii) in seen:
            return None
        seen.add((pi, pii))
        pi_turn = pi.bit_count() == pii.bit_count()
        mine = pi if pi_turn else pii
        for i in range(len(b.edges)):
            if not (free >> i) & 1:
                continue
            u, v = b.edges[i]
            if (mine & b.incident[u]).bit_count() >= k or (mine & b.incident[v]).bit_count() >= k:
                continue
            rest = dfs(pi | (1 << i), pii) if pi_turn else dfs(pi, pii | (1 << i))
            if rest is not None:
                return [b.edges[i]] + rest
        return None

    return dfs(0, 0)


def depth_limited_move(gs: StarState, depth: int) -> Pair:
    """Mover's best edge by depth-limited negamax (unresolved leaves score 0)."""
    p = Position.from_state(gs)
    b = board(p.n)
    k = p.k

    def neg(pi: int, pii: int, d: int) -> int:
        free = b.full & ~(pi | pii)
        if not free:
            return 0
        if d == 0:
            return 0
        pi_turn = pi.bit_count() == pii.bit_count()
        mine = pi if pi_turn else pii
        best = -1
        for i in range(len(b.edges)):
            if not (free >> i) & 1:
                continue
            u, v = b.edges[i]
            if (mine & b.incident[u]).bit_count() >= k or (mine & b.incident[v]).bit_count() >= k:
                continue
            val = -(neg(pi | (1 << i), pii, d - 1) if pi_turn else neg(pi, pii | (1 << i), d - 1))
            if val > best:
                best = val
                if best == 1:
                    break
        return best

    pi, pii = p.pi_edges, p.pii_edges
    free = b.full & ~(pi | pii)
    pi_turn = pi.bit_count() == pii.bit_count()
    mine = pi if pi_turn else pii
    best_e, best_v = None, -2
    for i in range(len(b.edges)):
        if not (free >> i) & 1:
            continue
        u, v = b.edges[i]
        if (mine & b.incident[u]).bit_count() >= k or (mine & b.incident[v]).bit_count() >= k:
            val = -1
        else:
            val = -(neg(pi | (1 << i), pii, depth - 1) if pi_turn else neg(pi, pii | (1 << i), depth - 1))
        if val > best_v:
            best_e, best_v = b.edges[i], val
    if best_e is None:
        raise GameOver("no moves left")
    return best_e


# -- tables ------------------------------------------------------------------


@dataclass
class TableRow:
    n: int
    k: int
    outcome: Optional[Outcome]
    nodes: int
    elapsed_ms: int
    canonical_mode: str

    @property
    def label(self) -> str:
        return self.outcome.value if self.outcome else "BudgetExceeded"


def outcome_table(k: int, n_range: Iterable[int], budget: Budget = DEFAULT_BUDGET,
                  mode: str = "full-permutation") -> list[TableRow]:
    rows = []
    for n in n_range:
        m = mode if not (mode == "full-permutation" and n > 8) else "refinement-hash"
        try:
            r = solve(n, k, budget, m)
            rows.append(TableRow(n, k, r.outcome, r.nodes, round(r.elapsed * 1000), m))
        except BudgetExceeded as exc:
            rows.append(TableRow(n, k, None, exc.nodes, round(exc.elapsed * 1000), m))
    return rows


def table_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "outcome", "nodes", "elapsed_ms", "canonical_mode"])
    for r in rows:
        w.writerow([r.n, r.k, r.label, r.nodes, r.elapsed_ms, r.canonical_mode])
    return buf.getvalue()


def replay_pv(n: int, k: int, pv: list[Pair]) -> StarState:
    gs = new_game(n, k)
    for e in pv:
        apply_move(gs, e)
    return gs
