"""Command line entry point: ``starclip simulate|pcg|solve|verify|play|export``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from starclip.adversaries import AdversaryPolicy
from starclip.graph import GraphError, WorkGraph, is_fg_sparse
from starclip.harness import (
    PCG_ADVERSARIES,
    ExhaustivePcg,
    GameSpec,
    fg_sparse_graphs,
    pcg_record,
    run_games,
    summarize,
)
from starclip.rules import GameOver, Player, RulesError, apply_move, fmt_edge, new_game, parse_edge
from starclip.solver import Budget, MODES, Position, best_move, outcome_table, table_csv
from starclip.strategy import BuilderStrategy, MonitorLevel, guaranteed
from starclip.verify import run_suites

log = logging.getLogger("starclip")

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_LOSS = 3
EXIT_CONFIG = 4

OUT_ENV = "STARCLIP_OUT"


class ConfigError(ValueError):
    pass


def out_path(arg: Optional[str], default_name: str) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(OUT_ENV, ".")) / default_name


def parse_range(text: str) -> list[int]:
    """``5``, ``2..7`` or ``3,5,8``."""
    out: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ConfigError(f"empty range {text!r}")
    return out


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.n < 1 or args.k < 1:
        raise ConfigError("need --n >= 1 and --k >= 1")
    specs = []
    for adv in args.adversary or ["random"]:
        policy = AdversaryPolicy.parse(adv)
        base = policy.seed if ":" in adv else args.seed
        for i in range(args.games):
            specs.append(GameSpec(args.n, args.k, policy.with_seed(base + i).spec(), args.monitor))
    if not guaranteed(args.n, args.k):
        log.warning("n=%d < 200k=%d: best-effort mode, transcripts flagged unguaranteed", args.n, 200 * args.k)
    lines = run_games(specs, args.workers)
    path = out_path(args.out, f"simulate_n{args.n}_k{args.k}.jsonl")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines))
    s = summarize(lines)
    print(json.dumps({"games": s.games, "outcomes": s.outcomes, "violations": s.violations,
                      "errors": s.errors, "late_losses": s.late_losses, "out": str(path)}, sort_keys=True))
    if s.pii_losses:
        return EXIT_LOSS
    if s.errors or (s.violations and args.monitor == "assert") or s.late_losses:
        return EXIT_VIOLATION
    return EXIT_OK


# -- pcg ----------------------------------------------------------------------


def cmd_pcg(args: argparse.Namespace) -> int:
    if args.all_sparse_max:
        return _pcg_all_sparse(args.all_sparse_max)
    if args.graph:
        g = WorkGraph.parse(args.graph)
    elif args.v is not None:
        g = WorkGraph(args.v)
    else:
        raise ConfigError("give --graph, --v or --all-sparse-max")
    if not is_fg_sparse(g) and not args.force:
        print(f"NotSparse: {g.literal()} is not (f,g)-sparse; use --force", file=sys.stderr)
        return EXIT_CONFIG
    if args.adversary == "exhaustive":
        if g.active_count() > 8:
            raise ConfigError("exhaustive adversary is limited to v <= 8")
        won = ExhaustivePcg().wins(g)
        print(json.dumps({"initial_graph": g.literal(), "adversary": "exhaustive", "won": won}))
        return EXIT_OK if won else EXIT_LOSS
    if args.adversary not in PCG_ADVERSARIES:
        raise ConfigError(f"unknown PCG adversary {args.adversary!r}")
    path = out_path(args.out, f"pcg_v{g.universe_size}.jsonl")
    path.parent.mkdir(parents=True, exist_ok=True)
    wins = violations = 0
    with path.open("w") as fh:
        for i in range(args.games):
            rec = pcg_record(g, args.adversary, args.seed + i)
            wins += rec["won"]
            violations += len(rec["violations"])
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
    print(json.dumps({"games": args.games, "wins": wins, "violations": violations, "out": str(path)}))
    if wins < args.games:
        return EXIT_LOSS
    return EXIT_VIOLATION if violations else EXIT_OK


def _pcg_all_sparse(max_v: int) -> int:
    solver = ExhaustivePcg()
    total = won = 0
    for v in range(1, max_v + 1):
        for g in fg_sparse_graphs(v):
            total += 1
            won += solver.wins(g)
    print(json.dumps({"graphs": total, "wins": won, "adversary": "exhaustive", "max_v": max_v}))
    return EXIT_OK if won == total else EXIT_LOSS


# -- solve --------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    budget = Budget(args.budget_nodes, args.budget_secs)
    rows = outcome_table(args.k, parse_range(args.n), budget, args.mode)
    text = table_csv(rows)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    for r in rows:
        if r.outcome is None:
            log.warning("n=%d k=%d: budget exceeded after %d nodes", r.n, r.k, r.nodes)
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    only = args.only.split(",") if args.only else None
    opts = {"inject_fault": args.inject_fault}
    if args.exhaustive_max is not None:
        opts["exhaustive_max"] = args.exhaustive_max
    if args.random_count is not None:
        opts["random_count"] = args.random_count
        opts["pcg_count"] = max(1, args.random_count // 10)
        opts["playouts"] = max(1, args.random_count // 10)
    reports = run_suites(only, **opts)
    for r in reports:
        print(r.line())
        for ex in r.examples:
            print(f"    counterexample: {ex}")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATION


# -- play ---------------------------------------------------------------------


def render(gs, out: TextIO) -> None:
    h1, h2 = gs.h_deg[Player.PI], gs.h_deg[Player.PII]
    out.write("vertex  " + " ".join(f"{v:>3}" for v in range(gs.n)) + "\n")
    out.write("PI deg  " + " ".join(f"{d:>3}" for d in h1) + "\n")
    out.write("PII deg " + " ".join(f"{d:>3}" for d in h2) + "\n")
    for p in Player:
        out.write(f"{p.name} edges: " + " ".join(fmt_edge(e) for e in gs.edges_of[p]) + "\n")


def cmd_play(args: argparse.Namespace, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> int:
    gs = new_game(args.n, args.k)
    strat = BuilderStrategy(args.n, args.k, MonitorLevel.LOG) if args.engine == "strategy" else None
    while gs.status.ongoing:
        if gs.to_move is Player.PI:
            if not args.quiet:
                render(gs, stdout)
            stdout.write("your move (u v): ")
            stdout.flush()
            line = stdin.readline()
            if not line:
                stdout.write("\nbye\n")
                return EXIT_OK
            try:
                e = parse_edge(line.strip())
                if max(e) >= gs.n:
                    raise RulesError(f"vertex out of range 0..{gs.n - 1}")
                apply_move(gs, e)
            except RulesError as exc:
                stdout.write(f"illegal input: {type(exc).__name__}: {exc}\n")
                continue
        else:
            if strat is not None:
                e = strat.choose(gs)
            else:
                e = best_move(Position.from_state(gs))
            stdout.write(f"engine plays {fmt_edge(e)}\n")
            apply_move(gs, e)
    st = gs.status
    if st.loser is Player.PI:
        stdout.write(f"PI loses (move {st.losing_move_index} completes a {gs.k + 1}-star)\n")
    elif st.loser is Player.PII:
        stdout.write(f"PII loses (move {st.losing_move_index} completes a {gs.k + 1}-star)\n")
    else:
        stdout.write("draw: all edges claimed\n")
    return EXIT_OK


# -- export -------------------------------------------------------------------


def cmd_export(args: argparse.Namespace) -> int:
    src = Path(args.input)
    dst = out_path(args.out, src.with_suffix(".csv").name)
    with src.open() as fh, dst.open("w", newline="") as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "k", "adversary", "seed", "outcome", "losing_move_index", "moves", "violations", "guaranteed"])
        for line in fh:
            if not line.strip():
                continue
            t = json.loads(line)
            w.writerow([t["n"], t["k"], t["adversary"], t["seed"], t["outcome"], t["losing_move_index"],
                        len(t["moves"]), len(t["monitor_violations"]), t["guaranteed"]])
    print(str(dst))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starclip", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="strategy vs adversaries, JSONL transcripts")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--games", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--adversary", action="append", help="name[:seed[:param=val,...]] (repeatable)")
    sp.add_argument("--monitor", choices=[m.value for m in MonitorLevel], default="assert")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("pcg", help="pair clipping game runs")
    sp.add_argument("--graph", help="v=<n>; edges=(u,v),...")
    sp.add_argument("--v", type=int, help="start from the empty graph on v vertices")
    sp.add_argument("--adversary", default="random", help="random|pass|attacker|exhaustive")
    sp.add_argument("--games", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--all-sparse-max", type=int, help="exhaustive check over every sparse graph up to v")
    sp.add_argument("--force", action="store_true", help="allow inputs that are not (f,g)-sparse")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_pcg)

    sp = sub.add_parser("solve", help="exact outcomes of small boards (CSV)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", required=True, help="e.g. 5, 2..7 or 3,5")
    sp.add_argument("--mode", choices=MODES, default="full-permutation")
    sp.add_argument("--budget-nodes", type=int, default=50_000_000)
    sp.add_argument("--budget-secs", type=float, default=600.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="run the property suites")
    sp.add_argument("--only", help="comma list of: nice-pair, clip-sparsity, pcg, nondraw")
    sp.add_argument("--exhaustive-max", type=int)
    sp.add_argument("--random-count", type=int)
    sp.add_argument("--inject-fault", action="store_true",
                    help="drop the degree-sum precondition in the clip-sparsity suite")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("play", help="play PI against the engine")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--engine", choices=["strategy", "solver"], default="strategy")
    sp.add_argument("--quiet", action="store_true")
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("export", help="summarize a JSONL transcript file as CSV")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, GraphError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GameOver as exc:
        print(f"game over: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
