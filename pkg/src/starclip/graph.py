"""Bitset graph over a fixed vertex universe.

Vertices are never renumbered: clipping a pair only deactivates it.  Every
average-degree comparison is done by integer cross-multiplication so that
boundary cases are decided exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional


class GraphError(ValueError):
    """Base class for rejected graph mutations and queries."""


class LoopEdge(GraphError):
    pass


class InactiveVertex(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class AdjacentPair(GraphError):
    pass


class TooFewVertices(GraphError):
    pass


Pair = tuple[int, int]


def norm(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SparseProfile:
    """Average-degree bound ``g(n) = alpha*n + 1`` with ``alpha = num/den``.

    ``include_f`` adds the maximum-degree bound ``(n - 1)/2``.
    """

    alpha_num: int = 1
    alpha_den: int = 100
    include_f: bool = True

    def __post_init__(self) -> None:
        if self.alpha_den <= 0 or self.alpha_num <= 0:
            raise ValueError("alpha must be a positive fraction")


DEFAULT_PROFILE = SparseProfile(1, 100, True)


class WorkGraph:
    """Mutable simple graph with adjacency stored as int bitmasks."""

    __slots__ = ("universe_size", "active", "adj", "edge_count")

    def __init__(self, universe_size: int, active: Optional[int] = None):
        if universe_size < 0:
            raise ValueError("universe_size must be non-negative")
        self.universe_size = universe_size
        self.active = (1 << universe_size) - 1 if active is None else active
        self.adj = [0] * universe_size
        self.edge_count = 0

    @classmethod
    def from_edges(cls, n: int, edges) -> "WorkGraph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @classmethod
    def parse(cls, text: str) -> "WorkGraph":
        """Parse ``v=<n>; edges=(u,v),(u,v),...``; rejects loops and duplicates."""
        m = re.fullmatch(r"\s*v\s*=\s*(\d+)\s*(?:;\s*edges\s*=\s*(.*?))?\s*;?\s*", text)
        if m is None:
            raise GraphError(f"malformed graph literal: {text!r}")
        g = cls(int(m.group(1)))
        body = m.group(2) or ""
        pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", body)
        if re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)|[\s,]", "", body):
            raise GraphError(f"malformed edge list: {body!r}")
        for a, b in pairs:
            g.add_edge(int(a), int(b))
        return g

    def literal(self) -> str:
        edges = ",".join(f"({u},{v})" for u, v in self.edges())
        return f"v={self.universe_size}; edges={edges}"

    def copy(self) -> "WorkGraph":
        g = WorkGraph.__new__(WorkGraph)
        g.universe_size = self.universe_size
        g.active = self.active
        g.adj = list(self.adj)
        g.edge_count = self.edge_count
        return g

    # -- queries -----------------------------------------------------------

    def _check_active(self, v: int) -> None:
        if not (0 <= v < self.universe_size) or not (self.active >> v) & 1:
            raise InactiveVertex(v)

    def is_active(self, v: int) -> bool:
        return 0 <= v < self.universe_size and bool((self.active >> v) & 1)

    def vertices(self) -> list[int]:
        return list(iter_bits(self.active))

    def active_count(self) -> int:
        return self.active.bit_count()

    def degree(self, v: int) -> int:
        self._check_active(v)
        return self.adj[v].bit_count()

    def max_degree(self) -> int:
        # inactive rows are always zero
        return max(map(int.bit_count, self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[Pair]:
        out = []
        for u in iter_bits(self.active):
            for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1)):
                out.append((u, v))
        return out

    def degree_sum(self) -> int:
        return sum(map(int.bit_count, self.adj))

    def check(self) -> None:
        """Assert the structural invariants; used by monitors and tests."""
        for v in range(self.universe_size):
            row = self.adj[v]
            if not (self.active >> v) & 1:
                assert row == 0, f"inactive vertex {v} has neighbours"
                continue
            assert not (row >> v) & 1, f"loop at {v}"
            assert row & ~self.active == 0, f"vertex {v} adjacent to inactive vertex"
            for w in iter_bits(row):
                assert (self.adj[w] >> v) & 1, f"asymmetric edge {v}-{w}"
        assert self.degree_sum() == 2 * self.edge_count

    # -- mutation ----------------------------------------------------------

    def add_edge(self, u: int, v: int) -> "WorkGraph":
        if u == v:
            raise LoopEdge(u)
        self._check_active(u)
        self._check_active(v)
        if (self.adj[u] >> v) & 1:
            raise DuplicateEdge(norm(u, v))
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u
        self.edge_count += 1
        return self

    def clip_pair(self, u: int, v: int) -> "WorkGraph":
        """Remove two non-adjacent active vertices and their incident edges."""
        if u == v:
            raise LoopEdge(u)
        self._check_active(u)
        self._check_active(v)
        if (self.adj[u] >> v) & 1:
            raise AdjacentPair(norm(u, v))
        adj = self.adj
        for x in (u, v):
            row = adj[x]
            self.edge_count -= row.bit_count()
            keep = ~(1 << x)
            for w in iter_bits(row):
                adj[w] &= keep
            adj[x] = 0
        self.active &= ~((1 << u) | (1 << v))
        return self

    def induced(self, mask: int) -> "WorkGraph":
        """Copy restricted to the active vertices in ``mask``."""
        g = WorkGraph(self.universe_size, self.active & mask)
        keep = g.active
        e2 = 0
        for v in iter_bits(keep):
            row = self.adj[v] & keep
            g.adj[v] = row
            e2 += row.bit_count()
        g.edge_count = e2 // 2
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorkGraph):
            return NotImplemented
        return (
            self.universe_size == other.universe_size
            and self.active == other.active
            and self.adj == other.adj
        )

    def __repr__(self) -> str:
        return f"WorkGraph({self.literal()!r}, active={self.vertices()})"


# -- sparseness predicates ---------------------------------------------------


def is_nice_pair(g: WorkGraph, u: int, v: int) -> bool:
    """Non-adjacent pair whose degree sum is at least twice the average degree."""
    g._check_active(u)
    g._check_active(v)
    if u == v or g.has_edge(u, v):
        return False
    return g.active_count() * (g.adj[u].bit_count() + g.adj[v].bit_count()) >= 4 * g.edge_count


def find_nice_pair(g: WorkGraph) -> Optional[Pair]:
    """Lexicographically smallest nice pair, or None.

    A pair always exists when ``2*max_degree <= v - 2``.
    """
    n = g.active_count()
    if n < 2:
        raise TooFewVertices(n)
    adj = g.adj
    deg = {v: adj[v].bit_count() for v in iter_bits(g.active)}
    # at_least[d] = active vertices of degree >= d
    top = max(deg.values())
    at_least = [0] * (top + 2)
    for v, d in deg.items():
        at_least[d] |= 1 << v
    for d in range(top - 1, -1, -1):
        at_least[d] |= at_least[d + 1]
    need_total = 4 * g.edge_count
    for u, du in deg.items():
        # smallest partner degree dv with n*(du+dv) >= 4e
        dv = max(0, -((n * du - need_total) // n))
        if dv > top:
            continue
        cand = at_least[dv] & ~adj[u] & ~((2 << u) - 1)
        if cand:
            return (u, (cand & -cand).bit_length() - 1)
    return None


def is_g_sparse(g: WorkGraph, p: SparseProfile = DEFAULT_PROFILE) -> bool:
    """``2e/v <= alpha*v + 1`` in integers; vacuously true on no vertices."""
    return g_sparse_counts(g.active_count(), g.edge_count, p)


def g_sparse_counts(v: int, e: int, p: SparseProfile = DEFAULT_PROFILE) -> bool:
    if v == 0:
        return True
    return 2 * e * p.alpha_den <= v * (p.alpha_num * v + p.alpha_den)


def fg_sparse_counts(v: int, e: int, delta: int, p: SparseProfile = DEFAULT_PROFILE) -> bool:
    if not g_sparse_counts(v, e, p):
        return False
    return not p.include_f or v == 0 or 2 * delta <= v - 1


def is_fg_sparse(g: WorkGraph, p: SparseProfile = DEFAULT_PROFILE) -> bool:
    return fg_sparse_counts(g.active_count(), g.edge_count, g.max_degree(), p)


def is_11_sparse(g: WorkGraph) -> bool:
    return g.max_degree() <= 1


def is_1_sparse(g: WorkGraph) -> bool:
    return 2 * g.edge_count <= g.active_count()
