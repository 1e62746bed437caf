"""Seeded first-player policies used to attack the second player's strategy.

Each move is a pure function of (policy, seed, position): the generator is
re-seeded from ``seed`` and the ply number before every decision, using
Python's Mersenne Twister (``random.Random``) with integer seeding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from starclip.graph import Pair, iter_bits, norm
from starclip.rules import GameOver, Player, StarState, parse_edge


class AdversaryError(RuntimeError):
    pass


class NoMoves(AdversaryError):
    pass


class ScriptExhausted(AdversaryError):
    pass


POLICIES = ("random", "safe-random", "s-attacker", "degree-attacker", "replay", "minimax")


@dataclass
class AdversaryPolicy:
    id: str
    seed: int = 0
    params: dict[str, int] = field(default_factory=dict)
    script: list[Pair] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.id not in POLICIES:
            raise ValueError(f"unknown policy {self.id!r}; choose from {', '.join(POLICIES)}")

    @classmethod
    def parse(cls, spec: str) -> "AdversaryPolicy":
        """``name[:seed[:param=val,...]]``; replay takes ``script=0-1+2-3``."""
        name, _, rest = spec.partition(":")
        seed_text, _, param_text = rest.partition(":")
        seed = int(seed_text) if seed_text else 0
        params: dict[str, int] = {}
        script: list[Pair] = []
        for item in filter(None, param_text.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"bad policy parameter {item!r}")
            if key == "script":
                script = [parse_edge(m) for m in val.split("+") if m]
            elif key == "fallback":
                params[key] = POLICIES.index(val) if not val.isdigit() else int(val)
            else:
                params[key] = int(val)
        return cls(name, seed, params, script)

    def spec(self) -> str:
        parts = [f"{k}={v}" for k, v in sorted(self.params.items())]
        if self.script:
            parts.append("script=" + "+".join(f"{u}-{v}" for u, v in self.script))
        out = f"{self.id}:{self.seed}"
        return out + (":" + ",".join(parts) if parts else "")

    def with_seed(self, seed: int) -> "AdversaryPolicy":
        return AdversaryPolicy(self.id, seed, dict(self.params), list(self.script))

    def rng(self, gs: StarState) -> random.Random:
        return random.Random(self.seed * 1_000_003 + len(gs.moves))

    def next_move(self, gs: StarState) -> Pair:
        if not gs.status.ongoing:
            raise GameOver(gs.status)
        if gs.claimed_count == gs.total_edges:
            raise NoMoves()
        return _DISPATCH[self.id](self, gs)


# -- sampling helpers --------------------------------------------------------


def _sample_pair(rng: random.Random, gs: StarState, pool: list[int], tries: int = 64) -> Optional[Pair]:
    """Uniform unclaimed pair inside ``pool``; rejection sampling, then exact."""
    if len(pool) < 2:
        return None
    for _ in range(tries):
        u, v = rng.sample(pool, 2)
        if not gs.is_claimed(u, v):
            return norm(u, v)
    mask = 0
    for v in pool:
        mask |= 1 << v
    cands = []
    for u in pool:
        cands.extend((u, v) for v in iter_bits(mask & ~gs.gamma_adj[u] & ~((2 << u) - 1)))
    return rng.choice(sorted(cands)) if cands else None


def _pi_low(gs: StarState) -> list[int]:
    deg = gs.h_deg[Player.PI]
    return [v for v in range(gs.n) if deg[v] < gs.k]


def _random(p: AdversaryPolicy, gs: StarState) -> Pair:
    pair = _sample_pair(p.rng(gs), gs, list(range(gs.n)))
    if pair is None:
        raise NoMoves()
    return pair


def _safe_random(p: AdversaryPolicy, gs: StarState) -> Pair:
    pair = _sample_pair(p.rng(gs), gs, _pi_low(gs))
    return pair if pair is not None else _random(p, gs)


def s_class(gs: StarState) -> list[int]:
    """Vertices of minimum PII-degree: the set the builder is currently clipping."""
    deg = gs.h_deg[Player.PII]
    low = min(deg)
    return [v for v in range(gs.n) if deg[v] == low]


def _s_attacker(p: AdversaryPolicy, gs: StarState) -> Pair:
    """Safe edge inside the low class, hung on its highest Gamma[S]-degree vertex."""
    rng = p.rng(gs)
    s = s_class(gs)
    s_mask = 0
    for v in s:
        s_mask |= 1 << v
    pi_deg = gs.h_deg[Player.PI]
    pool = [v for v in s if pi_deg[v] < gs.k]
    if len(pool) >= 2:
        score = {v: (gs.gamma_adj[v] & s_mask).bit_count() for v in pool}
        order = sorted(pool, key=lambda v: (-score[v], rng.random()))
        pool_mask = 0
        for v in pool:
            pool_mask |= 1 << v
        for u in order[:8]:
            free = pool_mask & ~gs.gamma_adj[u] & ~(1 << u)
            if free:
                cands = list(iter_bits(free))
                best = max(score[w] for w in cands)
                w = rng.choice([w for w in cands if score[w] == best])
                return norm(u, w)
        pair = _sample_pair(rng, gs, pool)
        if pair is not None:
            return pair
    return _safe_random(p, gs)


def _degree_attacker(p: AdversaryPolicy, gs: StarState) -> Pair:
    """Safe edge maximizing the summed Gamma-degree of its endpoints."""
    rng = p.rng(gs)
    pool = _pi_low(gs)
    if len(pool) < 2:
        return _random(p, gs)
    gdeg = {v: gs.gamma_adj[v].bit_count() for v in pool}
    rng.shuffle(pool)
    pool.sort(key=lambda v: -gdeg[v])
    best: Optional[Pair] = None
    best_score = -1
    for i, u in enumerate(pool):
        if 2 * gdeg[u] <= best_score:
            break
        for w in pool[i + 1:]:
            sc = gdeg[u] + gdeg[w]
            if sc <= best_score:
                break
            if not gs.is_claimed(u, w):
                best, best_score = norm(u, w), sc
                break
    return best if best is not None else _random(p, gs)


def _replay(p: AdversaryPolicy, gs: StarState) -> Pair:
    idx = gs.move_count(Player.PI)
    if idx < len(p.script):
        e = p.script[idx]
        if not gs.is_claimed(*e):
            return e
    fb = p.params.get("fallback")
    if fb is None:
        raise ScriptExhausted(f"script has no playable move at PI move {idx + 1}")
    return AdversaryPolicy(POLICIES[fb], p.seed, {}).next_move(gs)


def _minimax(p: AdversaryPolicy, gs: StarState) -> Pair:
    from starclip.solver import depth_limited_move

    depth = p.params.get("d", p.params.get("depth", 4))
    return depth_limited_move(gs, depth)


_DISPATCH = {
    "random": _random,
    "safe-random": _safe_random,
    "s-attacker": _s_attacker,
    "degree-attacker": _degree_attacker,
    "replay": _replay,
    "minimax": _minimax,
}


def next_pi_move(p: AdversaryPolicy, gs: StarState) -> Pair:
    return p.next_move(gs)

