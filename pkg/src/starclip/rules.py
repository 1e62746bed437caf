"""Rules of the (k+1)-star avoidance game on K_n.

Players alternately claim unclaimed edges of K_n; whoever first owns k+1
edges at a single vertex loses.  If every edge is claimed with no loss the
game is drawn.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from starclip.graph import Pair, iter_bits, norm


class RulesError(ValueError):
    pass


class InvalidParams(RulesError):
    pass


class AlreadyClaimed(RulesError):
    pass


class GameOver(RulesError):
    pass


class Player(enum.IntEnum):
    PI = 0
    PII = 1

    @property
    def other(self) -> "Player":
        return Player(1 - self)


class Outcome(enum.Enum):
    PI_WIN = "PIWin"
    PII_WIN = "PIIWin"
    DRAW = "Draw"


@dataclass(frozen=True)
class Status:
    """``loser`` is None while ongoing or drawn; ``losing_move_index`` is 1-based
    and counts only the loser's own moves."""

    ongoing: bool = True
    loser: Optional[Player] = None
    losing_move_index: Optional[int] = None

    @property
    def outcome(self) -> Optional[Outcome]:
        if self.ongoing:
            return None
        if self.loser is None:
            return Outcome.DRAW
        return Outcome.PII_WIN if self.loser is Player.PI else Outcome.PI_WIN


ONGOING = Status()
DRAW = Status(ongoing=False)


def ex_bound(n: int, k: int) -> int:
    """Maximum number of edges in a graph on n vertices with max degree k."""
    return n * k // 2


def parse_edge(text: str) -> Pair:
    """Parse ``u-v`` (or ``u v``) into a normalized pair."""
    parts = text.replace("-", " ").split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise RulesError(f"malformed edge {text!r}; expected u-v")
    u, v = int(parts[0]), int(parts[1])
    if u == v:
        raise RulesError(f"loop {text!r}")
    return norm(u, v)


def fmt_edge(e: Pair) -> str:
    return f"{e[0]}-{e[1]}"


@dataclass
class StarState:
    """Both players' graphs as bitmask rows, their union, and the move log."""

    n: int
    k: int
    to_move: Player = Player.PI
    status: Status = ONGOING
    h_adj: tuple[list[int], list[int]] = field(init=False)
    h_deg: tuple[list[int], list[int]] = field(init=False)
    gamma_adj: list[int] = field(init=False)
    edges_of: tuple[list[Pair], list[Pair]] = field(init=False)
    moves: list[tuple[Player, Pair]] = field(init=False, default_factory=list)

    def __post_init__(self) -> None:
        n = self.n
        self.h_adj = ([0] * n, [0] * n)
        self.h_deg = ([0] * n, [0] * n)
        self.gamma_adj = [0] * n
        self.edges_of = ([], [])

    @property
    def total_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def claimed_count(self) -> int:
        return len(self.moves)

    def is_claimed(self, u: int, v: int) -> bool:
        return bool((self.gamma_adj[u] >> v) & 1)

    def degree(self, p: Player, v: int) -> int:
        return self.h_deg[p][v]

    def gamma_degree(self, v: int) -> int:
        return self.gamma_adj[v].bit_count()

    def max_degree(self, p: Player) -> int:
        return max(self.h_deg[p], default=0)

    def gamma_max_degree(self) -> int:
        return max((row.bit_count() for row in self.gamma_adj), default=0)

    def move_count(self, p: Player) -> int:
        return len(self.edges_of[p])

    def last_move(self) -> Optional[tuple[Player, Pair]]:
        return self.moves[-1] if self.moves else None

    def copy(self) -> "StarState":
        c = StarState(self.n, self.k, self.to_move, self.status)
        c.h_adj = (list(self.h_adj[0]), list(self.h_adj[1]))
        c.h_deg = (list(self.h_deg[0]), list(self.h_deg[1]))
        c.gamma_adj = list(self.gamma_adj)
        c.edges_of = (list(self.edges_of[0]), list(self.edges_of[1]))
        c.moves = list(self.moves)
        return c


def new_game(n: int, k: int) -> StarState:
    if n < 1 or k < 1:
        raise InvalidParams(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    s = StarState(n, k)
    if s.total_edges == 0:
        s.status = DRAW
    return s


def _require_ongoing(s: StarState) -> None:
    if not s.status.ongoing:
        raise GameOver(s.status)


def legal_moves(s: StarState) -> list[Pair]:
    _require_ongoing(s)
    n = s.n
    full = (1 << n) - 1
    out = []
    for u in range(n):
        free = full & ~s.gamma_adj[u] & ~((2 << u) - 1)
        out.extend((u, v) for v in iter_bits(free))
    return out


def low_mask(s: StarState, p: Player, below: int) -> int:
    """Vertices whose p-degree is strictly less than ``below``."""
    m = 0
    for v, d in enumerate(s.h_deg[p]):
        if d < below:
            m |= 1 << v
    return m


def safe_moves(s: StarState, p: Player) -> list[Pair]:
    """Unclaimed edges that keep every p-degree at most k."""
    _require_ongoing(s)
    ok = low_mask(s, p, s.k)
    out = []
    for u in iter_bits(ok):
        free = ok & ~s.gamma_adj[u] & ~((2 << u) - 1)
        out.extend((u, v) for v in iter_bits(free))
    return out


def apply_move(s: StarState, e: Pair) -> StarState:
    """Claim ``e`` for the player to move; mutates and returns ``s``."""
    _require_ongoing(s)
    u, v = norm(*e)
    if u == v or not (0 <= u < s.n and 0 <= v < s.n):
        raise RulesError(f"not an edge of K_{s.n}: {e}")
    if (s.gamma_adj[u] >> v) & 1:
        raise AlreadyClaimed(f"edge {u}-{v} is already claimed")
    p = s.to_move
    adj, deg = s.h_adj[p], s.h_deg[p]
    adj[u] |= 1 << v
    adj[v] |= 1 << u
    deg[u] += 1
    deg[v] += 1
    s.gamma_adj[u] |= 1 << v
    s.gamma_adj[v] |= 1 << u
    s.moves.append((p, (u, v)))
    s.edges_of[p].append((u, v))
    if deg[u] > s.k or deg[v] > s.k:
        s.status = Status(ongoing=False, loser=p, losing_move_index=len(s.edges_of[p]))
    elif len(s.moves) == s.total_edges:
        s.status = DRAW
    else:
        s.to_move = p.other
    return s


def replay(n: int, k: int, edges) -> StarState:
    s = new_game(n, k)
    for e in edges:
        apply_move(s, e)
    return s
