"""Second player's layered-matching strategy for the star avoidance game.

PII raises the degrees of its own graph H2 one layer at a time.  In layer j
the vertices still at H2-degree j-1 form S; PII plays the pair clipping game
on Gamma[S] (claimed edges are obstacles), claiming the edge between each
clipped pair.  PI's moves inside S are the adder's edges, moves elsewhere
are passes.  The one or two vertices left in S are then paired with
degree-j vertices.  After the last layer, H2 misses one or two degree units;
with nk even a two-edge endgame finishes the job.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from starclip.graph import DEFAULT_PROFILE, Pair, WorkGraph, is_fg_sparse, iter_bits, norm
from starclip.pcg import (
    PASS,
    AddEdge,
    ClipPair,
    PcgState,
    Phase as PcgPhase,
    greedy_clip_move,
    monitor_claims,
    pcg_apply_pi,
    pcg_apply_pii,
    pcg_new,
)
from starclip.rules import Player, StarState, fmt_edge, safe_moves


class StrategyStuck(RuntimeError):
    """A step the construction relies on could not be carried out."""


class MonitorViolation(AssertionError):
    pass


class MonitorLevel(str, enum.Enum):
    OFF = "off"
    LOG = "log"
    ASSERT = "assert"


class StratPhase(str, enum.Enum):
    STAGE_START = "stage-start"
    STAGE_PCG = "stage-pcg"
    STAGE_PAIRING = "stage-pairing"
    ENDGAME_ODD = "endgame-odd"
    ENDGAME_EVEN_WINDOW = "endgame-even"
    DONE = "done"


def guaranteed(n: int, k: int) -> bool:
    return n >= 200 * k


def low_set(gs: StarState, degree: int) -> int:
    m = 0
    for v, d in enumerate(gs.h_deg[Player.PII]):
        if d == degree:
            m |= 1 << v
    return m


def gamma_induced(gs: StarState, mask: int) -> WorkGraph:
    g = WorkGraph(gs.n, mask)
    e2 = 0
    for v in iter_bits(mask):
        row = gs.gamma_adj[v] & mask
        g.adj[v] = row
        e2 += row.bit_count()
    g.edge_count = e2 // 2
    return g


def claim_state_reached(gs: StarState, k: int) -> bool:
    """One or two vertices at H2-degree k-1, the rest at k, and no claimed
    edge between the deficient vertices."""
    deg = gs.h_deg[Player.PII]
    short = [v for v, d in enumerate(deg) if d == k - 1]
    if not 1 <= len(short) <= 2 or any(d not in (k, k - 1) for d in deg):
        return False
    return len(short) == 1 or not gs.is_claimed(*short)


@dataclass(frozen=True)
class EndgameInfo:
    e1: Pair
    e2: Pair
    pi_safe: tuple[Pair, ...]


@dataclass
class BuilderStrategy:
    n: int
    k: int
    monitor: MonitorLevel = MonitorLevel.ASSERT
    stage_j: int = 1
    phase: StratPhase = StratPhase.STAGE_START
    pcg: Optional[PcgState] = None
    pending_e2: Optional[Pair] = None
    last_returned: Optional[Pair] = None
    violations: list[str] = field(default_factory=list)
    endgame: Optional[EndgameInfo] = None
    claim_reached: bool = False
    annotation: dict = field(default_factory=dict)

    @property
    def guaranteed(self) -> bool:
        return guaranteed(self.n, self.k)

    # -- monitoring --------------------------------------------------------

    def _flag(self, msg: str) -> None:
        if self.monitor is MonitorLevel.OFF:
            return
        self.violations.append(msg)
        if self.monitor is MonitorLevel.ASSERT and self.guaranteed:
            raise MonitorViolation(msg)

    @property
    def _checking(self) -> bool:
        return self.monitor is not MonitorLevel.OFF

    # -- stage bookkeeping -------------------------------------------------

    def _start_stage(self, gs: StarState) -> None:
        """Set up the clipping game for the current layer from the position
        just before PI's latest move."""
        j = self.stage_j
        s_mask = low_set(gs, j - 1)
        if self._checking:
            deg = gs.h_deg[Player.PII]
            ahead = [v for v, d in enumerate(deg) if d == j]
            if len(ahead) > 2 or any(d not in (j - 1, j) for d in deg):
                self._flag(f"stage {j} start: H2 degrees not in layer shape ({len(ahead)} ahead)")
        g0 = gamma_induced(gs, s_mask)
        last = gs.last_move()
        if last is not None and last[0] is Player.PI:
            u, v = last[1]
            if (s_mask >> u) & 1 and (s_mask >> v) & 1:
                g0.adj[u] &= ~(1 << v)
                g0.adj[v] &= ~(1 << u)
                g0.edge_count -= 1
        if self._checking:
            vn = g0.active_count()
            if vn < self.n - 2:
                self._flag(f"stage {j} start: |S|={vn} < n-2")
            if g0.max_degree() > 2 * self.k:
                self._flag(f"stage {j} start: max degree of Gamma[S] exceeds 2k")
            if self.guaranteed and not is_fg_sparse(g0, DEFAULT_PROFILE):
                self._flag(f"stage {j} start: Gamma[S] not (f,g)-sparse")
        self.pcg = pcg_new(g0)
        self.phase = StratPhase.STAGE_PCG

    def _finish_pcg(self) -> None:
        pcg = self.pcg
        assert pcg is not None
        if self._checking:
            for v in monitor_claims(pcg.history):
                self._flag(f"stage {self.stage_j} clipping game: {v}")
            if not pcg.won:
                self._flag(f"stage {self.stage_j}: clipping game lost")

    # -- move selection ----------------------------------------------------

    def choose(self, gs: StarState) -> Pair:
        """PII's next edge.  Assumes the returned edge is then played."""
        if not gs.status.ongoing or gs.to_move is not Player.PII:
            raise StrategyStuck("strategy asked to move out of turn")
        if self.last_returned is not None and gs.edges_of[Player.PII][-1] != self.last_returned:
            raise StrategyStuck("position does not follow the strategy's own moves")
        edge = self._choose(gs)
        if self._checking:
            deg = gs.h_deg[Player.PII]
            if gs.is_claimed(*edge):
                self._flag(f"strategy chose claimed edge {fmt_edge(edge)}")
            elif deg[edge[0]] >= self.k or deg[edge[1]] >= self.k:
                self._flag(f"strategy edge {fmt_edge(edge)} exceeds degree {self.k}")
        self.last_returned = edge
        return edge

    def _annotate(self, branch: int = 0) -> None:
        self.annotation = {"phase": self.phase.value, "stage": self.stage_j, "branch": branch}

    def _choose(self, gs: StarState) -> Pair:
        if self.phase is StratPhase.ENDGAME_EVEN_WINDOW:
            if self.pending_e2 is None:
                raise StrategyStuck("even endgame already complete")
            e2 = self.pending_e2
            self.pending_e2 = None
            self._annotate()
            self.phase = StratPhase.DONE
            if self._checking:
                after = gs.move_count(Player.PII) + 1
                if after != self.n * self.k // 2:
                    self._flag(f"endgame: H2 ends with {after} edges, expected {self.n * self.k // 2}")
            return e2
        if self.phase in (StratPhase.ENDGAME_ODD, StratPhase.DONE):
            raise StrategyStuck(f"PI survived past the end of the construction ({self.phase.value})")

        if self.phase is StratPhase.STAGE_START:
            self._start_stage(gs)

        if self.phase is StratPhase.STAGE_PCG:
            return self._pcg_move(gs)
        return self._pairing_move(gs)

    def _pcg_move(self, gs: StarState) -> Pair:
        pcg = self.pcg
        assert pcg is not None
        s_mask = pcg.graph.active
        if self._checking and s_mask != low_set(gs, self.stage_j - 1):
            self._flag(f"stage {self.stage_j}: clipping graph vertices differ from S")
        last = gs.last_move()
        move = PASS
        if last is not None and last[0] is Player.PI:
            u, v = last[1]
            if (s_mask >> u) & 1 and (s_mask >> v) & 1:
                move = AddEdge(u, v)
        pcg_apply_pi(pcg, move)
        if self._checking and pcg.graph.adj != gamma_induced(gs, s_mask).adj:
            self._flag(f"stage {self.stage_j}: clipping graph differs from Gamma[S]")
        try:
            clip = greedy_clip_move(pcg)
        except Exception as exc:
            raise StrategyStuck(f"stage {self.stage_j}: no clip available ({exc})") from exc
        edge = clip.pair()
        branch = pcg.pending_branch

        nk = self.n * self.k
        last_stage = self.stage_j == self.k
        at_window = (
            last_stage
            and nk % 2 == 0
            and gs.move_count(Player.PII) == nk // 2 - 2
        )
        if at_window:
            return self._even_window(gs, edge, branch)

        pcg_apply_pii(pcg, clip)
        self._annotate(branch)
        if pcg.phase is PcgPhase.FINISHED:
            self._finish_pcg()
            if last_stage:
                if self._checking:
                    after = gs.copy()
                    after.h_deg[Player.PII][edge[0]] += 1
                    after.h_deg[Player.PII][edge[1]] += 1
                    after.gamma_adj[edge[0]] |= 1 << edge[1]
                    after.gamma_adj[edge[1]] |= 1 << edge[0]
                    self.claim_reached = claim_state_reached(after, self.k)
                    if not self.claim_reached:
                        self._flag("final layer finished without the deficiency claim")
                    left = pcg.graph.active_count()
                    if left != (1 if nk % 2 else 2):
                        self._flag(f"final layer left {left} deficient vertices for nk={nk}")
                self.phase = StratPhase.ENDGAME_ODD if nk % 2 else StratPhase.ENDGAME_EVEN_WINDOW
            else:
                self.phase = StratPhase.STAGE_PAIRING
        return edge

    def _even_window(self, gs: StarState, e1: Pair, branch: int) -> Pair:
        info = self.endgame_info(gs, e1)
        self.endgame = info
        self.claim_reached = True
        if len(info.pi_safe) > 1:
            self._flag(f"endgame: PI has {len(info.pi_safe)} safe edges at the decision point")
            if self.monitor is not MonitorLevel.OFF and self.guaranteed:
                raise StrategyStuck("PI's last move is not forced")
        pcg = self.pcg
        assert pcg is not None
        self.phase = StratPhase.ENDGAME_EVEN_WINDOW
        if len(info.pi_safe) == 1 and info.pi_safe[0] in (e1, info.e2):
            take = info.pi_safe[0]
            if take == e1:
                pcg_apply_pii(pcg, ClipPair(*e1))
                self._finish_pcg()
            self._annotate(branch if take == e1 else 0)
            self.annotation["endgame"] = "take-pi-edge"
            self.phase = StratPhase.DONE
            return take
        pcg_apply_pii(pcg, ClipPair(*e1))
        self._finish_pcg()
        self.pending_e2 = info.e2
        self._annotate(branch)
        self.annotation["endgame"] = "e1"
        return e1

    def endgame_info(self, gs: StarState, e1: Pair) -> EndgameInfo:
        nk = self.n * self.k
        if nk % 2 or gs.move_count(Player.PII) != nk // 2 - 2 or gs.move_count(Player.PI) != nk // 2 - 1:
            raise StrategyStuck("endgame_info called outside the even endgame window")
        deg = gs.h_deg[Player.PII]
        short = [v for v, d in enumerate(deg) if d == self.k - 1 and v not in e1]
        if len(short) != 2 or any(d < self.k - 1 for d in deg):
            raise StrategyStuck(f"after e1 expected two deficient vertices, found {short}")
        e2 = norm(*short)
        if gs.is_claimed(*e2):
            raise StrategyStuck(f"closing edge {fmt_edge(e2)} already claimed")
        return EndgameInfo(e1=e1, e2=e2, pi_safe=tuple(safe_moves(gs, Player.PI)))

    def _pairing_move(self, gs: StarState) -> Pair:
        j = self.stage_j
        s_mask = low_set(gs, j - 1)
        if not s_mask:
            raise StrategyStuck(f"stage {j}: pairing with empty S")
        s = (s_mask & -s_mask).bit_length() - 1
        partners = low_set(gs, j) & ~gs.gamma_adj[s] & ~(1 << s)
        if not partners:
            raise StrategyStuck(f"stage {j}: no degree-{j} partner for {s}")
        w = (partners & -partners).bit_length() - 1
        self._annotate()
        if s_mask == 1 << s:
            # S empties with this move; the next layer starts at PII's next turn
            self.stage_j += 1
            self.phase = StratPhase.STAGE_START
        return norm(s, w)


def play_strategy_move(strategy: BuilderStrategy, gs: StarState) -> tuple[Pair, dict]:
    edge = strategy.choose(gs)
    return edge, dict(strategy.annotation)
