"""Command-line front end: ``diag-games {play,table,oracle,report}``.

Exit codes: 0 expected outcome, 1 a shipped strategy lost a game it should
win, 2 usage error, 3 an exhaustive search was refused for exceeding its budget.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, TextIO

from . import cantor, engine, kronecker, oracle
from .core import (
    BudgetExceeded,
    DecisionClaim,
    GameError,
    GameParams,
    InvalidParams,
    PartialMatrix,
    Query,
    Regime,
    SearchClaim,
    parse_vector,
    to_str,
)

EXIT_OK, EXIT_UNEXPECTED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SEED_ENV = "DIAG_GAMES_SEED"


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}")


def parse_range(text: str) -> range:
    """``"3"`` or ``"4-7"`` (inclusive)."""
    try:
        if "-" in text:
            lo, hi = text.split("-", 1)
            return range(int(lo), int(hi) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise UsageError(f"bad range {text!r}; use N or LO-HI")


def parse_sets(text: str, n: int) -> list[set[int]]:
    """``"1,2;1;"`` -> [{0,1}, {0}, set()] (1-based input)."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        cols = set()
        if part:
            for tok in part.split(","):
                j = int(tok) - 1
                if not 0 <= j < n:
                    raise UsageError(f"column {tok} outside 1..{n}")
                cols.add(j)
        out.append(cols)
    return out


# ---------- manual players ----------

class ManualCantor(cantor.Strategy):
    """Reads moves from a text stream.

    ``i j`` queries bit j of vector i (1-based); ``u BITS`` claims a vector;
    ``complete`` / ``incomplete [BITS]`` decide when m >= 2^n.
    """

    def __init__(self, params: GameParams, stdin: TextIO, stdout: TextIO):
        super().__init__(params)
        self.stdin, self.stdout = stdin, stdout

    def _read(self) -> str:
        self.stdout.write("cantor> ")
        self.stdout.flush()
        line = self.stdin.readline()
        if not line:
            raise UsageError("input ended before Cantor made a claim")
        return line.strip()

    def _run(self):
        p = self.params
        L = PartialMatrix(p)
        large = p.regime is Regime.LARGE
        if large:
            hint = "'i j' to query, 'complete' or 'incomplete [bits]' to decide"
        else:
            hint = "'i j' to query, 'u BITS' to claim a vector"
        print(f"m={p.m} n={p.n}: {hint}", file=self.stdout)
        while True:
            words = self._read().split()
            if not words:
                continue
            try:
                if words[0] == "u" and not large and len(words) == 2:
                    return SearchClaim(parse_vector(words[1], p.n))
                if words[0] == "complete" and large:
                    return DecisionClaim(True)
                if words[0] == "incomplete" and large:
                    witness = parse_vector(words[1], p.n) if len(words) > 1 else None
                    return DecisionClaim(False, witness)
                if len(words) == 2:
                    q = Query(int(words[0]) - 1, int(words[1]) - 1)
                    q.check(p)
                    if L.is_known(q):
                        print("already asked", file=self.stdout)
                        continue
                    b = yield q
                    L.set_cell(q, b)
                    print(f"v{q.row + 1}[{q.col + 1}] = {b}", file=self.stdout)
                    continue
            except (ValueError, InvalidParams) as exc:
                print(f"invalid: {exc}", file=self.stdout)
                continue
            print(f"unrecognized; {hint}", file=self.stdout)


class ManualKronecker(kronecker.Adversary):
    def __init__(self, stdin: TextIO, stdout: TextIO):
        self.stdin, self.stdout = stdin, stdout

    def answer(self, q: Query) -> int:
        while True:
            self.stdout.write(f"kronecker: bit {q.col + 1} of vector {q.row + 1}? ")
            self.stdout.flush()
            line = self.stdin.readline()
            if not line:
                raise UsageError("input ended while waiting for an answer")
            if line.strip() in ("0", "1"):
                return int(line.strip())


# ---------- play ----------

CANTORS = ("diagonal", "adaptive", "oblivious", "endgame", "manual")


def _make_adversary(name: str, params: GameParams, stdin, stdout):
    if name == "balanced":
        return kronecker.BalancedAdversary(params.n)
    if name == "covering":
        return kronecker.CoveringAdversary()
    if name == "zero-first":
        return kronecker.ZeroFirstAdversary(params)
    if name == "manual":
        return ManualKronecker(stdin, stdout)
    if name.startswith("random:"):
        try:
            return kronecker.RandomAdversary(int(name.split(":", 1)[1]))
        except ValueError:
            raise UsageError(f"bad random seed in {name!r}")
    raise UsageError(f"unknown Kronecker strategy {name!r}")


def _oblivious_plan_for(name: str, params: GameParams) -> cantor.QueryPlan:
    if name == "endgame":
        return cantor.endgame_plan(params)
    if params.regime is Regime.SMALL:
        return cantor.QueryPlan(params.n, tuple(frozenset({i}) for i in range(params.m)))
    return cantor.oblivious_plan(params)


def cmd_play(args, stdin: TextIO, stdout: TextIO) -> int:
    params = GameParams(args.m, args.n)
    seed = args.seed
    adversary = _make_adversary(args.kronecker, params, stdin, stdout)
    if args.kronecker == "covering" and args.cantor not in ("oblivious", "endgame"):
        raise UsageError("the covering adversary needs an oblivious Cantor (oblivious or endgame)")
    if args.cantor in ("oblivious", "endgame"):
        plan = _oblivious_plan_for(args.cantor, params)
        t = engine.play_oblivious(plan, cantor.plan_output, adversary, params)
    else:
        if args.cantor == "diagonal":
            strategy = cantor.DiagonalStrategy(params)
        elif args.cantor == "adaptive":
            strategy = cantor.AdaptiveStrategy(params)
        else:
            strategy = ManualCantor(params, stdin, stdout)
        t = engine.play_adaptive(strategy, adversary, params)
    t.meta = {"cantor": args.cantor, "kronecker": args.kronecker, "seed": seed}
    winner = engine.judge(t)
    if args.out:
        Path(args.out).write_text(t.to_json() + "\n")
    claim = t.claim
    if isinstance(claim, SearchClaim):
        claim_text = f"u={to_str(claim.u, params.n)}"
    else:
        claim_text = "complete" if claim.complete else "incomplete"
        if claim.witness is not None:
            claim_text += f" witness={to_str(claim.witness, params.n)}"
    print(f"queries={t.num_queries} claim={claim_text} winner={winner.value}", file=stdout)
    if args.cantor != "manual" and winner is not engine.Winner.CANTOR:
        return EXIT_UNEXPECTED
    return EXIT_OK


# ---------- table / report ----------

def _table_rows(args) -> list[engine.Row]:
    return engine.table(parse_range(args.n_range), parse_range(args.m_range), args.scenario, args.seed, args.jobs)


def _unexpected(rows: list[engine.Row]) -> bool:
    return any(r.winner == engine.Winner.KRONECKER.value for r in rows)


def cmd_table(args, stdin: TextIO, stdout: TextIO) -> int:
    rows = _table_rows(args)
    stdout.write(engine.to_csv(rows))
    return EXIT_UNEXPECTED if _unexpected(rows) else EXIT_OK


def cmd_report(args, stdin: TextIO, stdout: TextIO) -> int:
    from .plotting import plot_table

    rows = _table_rows(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{args.scenario}.csv"
    fig_path = out / f"{args.scenario}.png"
    csv_path.write_text(engine.to_csv(rows))
    plot_table(rows, fig_path, title=args.scenario)
    print(f"wrote {csv_path} and {fig_path}", file=stdout)
    return EXIT_UNEXPECTED if _unexpected(rows) else EXIT_OK


# ---------- oracle ----------

def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--which {args.which} needs --{name.replace('_', '-')}")


def cmd_oracle(args, stdin: TextIO, stdout: TextIO) -> int:
    which = args.which
    _need(args, "n")
    n = args.n
    if which in ("g", "f"):
        _need(args, "m")
        params = GameParams(args.m, n)
        fn = oracle.adaptive_game_value if which == "g" else oracle.oblivious_game_value
        print(fn(params), file=stdout)
    elif which == "covering":
        _need(args, "plan")
        plan = cantor.QueryPlan.from_sets(n, parse_sets(args.plan, n))
        result = oracle.covering_exists(plan)
        if result is None:
            print("none", file=stdout)
        else:
            for i, f in enumerate(result.functions):
                cells = ",".join(f"{j + 1}={b}" for j, b in sorted(f.items()))
                print(f"row {i + 1}: {cells or '(empty)'}", file=stdout)
    elif which == "edge-matching":
        _need(args, "dirs")
        dirs = [j - 1 for j in _ints(args.dirs)]
        result = oracle.edge_matching(dirs, n)
        if result is None:
            print("none (parity)" if oracle.parity_obstructed(dirs, n) else "none", file=stdout)
        else:
            print(" ".join(f"{to_str(a, n)}-{to_str(b, n)}" for a, b in result), file=stdout)
    elif which == "cube-cover":
        _need(args, "sets")
        sets = parse_sets(args.sets, n)
        result = oracle.cube_cover_search(sets, n)
        if result is None:
            print("none", file=stdout)
        else:
            for J, base in result:
                pattern = "".join("*" if j in J else str((base >> (n - 1 - j)) & 1) for j in range(n))
                print(pattern, file=stdout)
    else:  # argparse restricts the choices
        raise UsageError(f"unknown oracle {which!r}")
    return EXIT_OK


def _ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


# ---------- entry point ----------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diag-games", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="run one game and judge it")
    play.add_argument("--n", type=int, required=True)
    play.add_argument("--m", type=int, required=True)
    play.add_argument("--cantor", choices=CANTORS, required=True)
    play.add_argument("--kronecker", required=True, help="balanced | covering | zero-first | manual | random:SEED")
    play.add_argument("--out", help="write the transcript (JSON) here")
    play.add_argument("--seed", type=int, default=None, help=f"recorded in the transcript (default ${SEED_ENV} or 0)")
    play.set_defaults(func=cmd_play)

    for name, func, helptext in (
        ("table", cmd_table, "CSV of query counts, formulas, oracle values and verdicts"),
        ("report", cmd_report, "the table as CSV plus a PNG figure"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--scenario", choices=engine.SCENARIOS, required=True)
        p.add_argument("--n-range", required=True, help="N or LO-HI")
        p.add_argument("--m-range", required=True, help="M or LO-HI")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
        if name == "report":
            p.add_argument("--out-dir", default="reports")
        p.set_defaults(func=func)

    orc = sub.add_parser("oracle", help="exhaustive ground truth on tiny instances")
    orc.add_argument("--which", choices=("g", "f", "covering", "edge-matching", "cube-cover"), required=True)
    orc.add_argument("--n", type=int)
    orc.add_argument("--m", type=int)
    orc.add_argument("--plan", help="row column sets, e.g. '1,2;1;2'")
    orc.add_argument("--dirs", help="edge directions, e.g. '1,1,2'")
    orc.add_argument("--sets", help="cube free-coordinate sets, e.g. '1,2;3'")
    orc.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[list[str]] = None, stdin: TextIO = None, stdout: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        return args.func(args, stdin, stdout)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GameError as exc:
        print(f"game error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
