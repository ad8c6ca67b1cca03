"""Game runners, judges and experiment tables."""
from __future__ import annotations

import csv
import enum
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from . import cantor, kronecker, matching, oracle
from .cantor import QueryPlan
from .core import (
    BudgetExceeded,
    DecisionClaim,
    DuplicateQuery,
    GameError,
    GameParams,
    InvalidParams,
    PartialMatrix,
    Query,
    Regime,
    SearchClaim,
    Transcript,
    defeats_all_rows,
)


class Winner(str, enum.Enum):
    CANTOR = "cantor"
    KRONECKER = "kronecker"


class IllegalClaim(GameError):
    pass


def play_adaptive(strategy, adversary, params: GameParams) -> Transcript:
    """Alternate queries and answers until the strategy claims.

    The engine rejects repeated queries and stops a strategy that tries to go
    past m*n queries.
    """
    L = PartialMatrix(params)
    t = Transcript(params)
    events = t.events
    limit = params.cells
    while True:
        item = strategy.next_query()
        if not isinstance(item, Query):
            break
        item.check(params)
        if L.is_known(item):
            raise DuplicateQuery(f"query ({item.row + 1},{item.col + 1}) asked twice")
        if len(events) >= limit:
            raise GameError(f"strategy exceeded {limit} queries")
        b = adversary.answer(item)
        L.set_cell(item, b)
        events.append((item, b))
        strategy.observe(b)
    _check_claim(item, params)
    t.claim = item
    return t


def _check_claim(claim, params: GameParams) -> None:
    large = params.regime is Regime.LARGE
    if isinstance(claim, SearchClaim):
        if large:
            raise IllegalClaim("search claims are not allowed when m >= 2^n")
        if not 0 <= claim.u < 1 << params.n:
            raise IllegalClaim("claimed vector has the wrong length")
    elif isinstance(claim, DecisionClaim):
        if not large:
            raise IllegalClaim("decision claims are only allowed when m >= 2^n")
    else:
        raise IllegalClaim(f"not a claim: {claim!r}")


def play_oblivious(
    plan: QueryPlan,
    output_fn: Callable[[QueryPlan, PartialMatrix], int],
    adversary,
    params: GameParams,
) -> Transcript:
    """Show the whole plan to the adversary, answer it, then let Cantor output."""
    if plan.m != params.m or plan.n != params.n:
        raise InvalidParams("plan shape does not match the game")
    adversary.observe_plan(plan)
    L = PartialMatrix(params)
    t = Transcript(params)
    for q in plan.queries():
        b = adversary.answer(q)
        L.set_cell(q, b)
        t.events.append((q, b))
    claim = SearchClaim(output_fn(plan, L))
    _check_claim(claim, params)
    t.claim = claim
    return t


def judge_search(t: Transcript) -> Winner:
    """Cantor wins iff every row has an answered bit that differs from u."""
    if not isinstance(t.claim, SearchClaim):
        raise IllegalClaim("transcript has no search claim")
    return Winner.CANTOR if defeats_all_rows(t.matrix(), t.claim.u) else Winner.KRONECKER


def judge_decision(t: Transcript) -> Winner:
    """Judge a claim about whether the rows contain all of {0,1}^n.

    ``complete`` is right only when every vector already appears as a fully
    queried row: any row with an unknown cell can be filled to dodge a given
    vector. ``incomplete`` with a witness is right when every row rules the
    witness out; without a witness it is right only if the matrix is blocked.
    """
    if not isinstance(t.claim, DecisionClaim):
        raise IllegalClaim("transcript has no decision claim")
    if t.params.regime is not Regime.LARGE:
        raise IllegalClaim("decision claims are only judged when m >= 2^n")
    L = t.matrix()
    claim = t.claim
    if claim.complete:
        ok = L.is_complete()
    elif claim.witness is not None:
        ok = defeats_all_rows(L, claim.witness)
    else:
        ok = matching.is_unblocked(L) is None
    return Winner.CANTOR if ok else Winner.KRONECKER


def judge(t: Transcript) -> Winner:
    if isinstance(t.claim, DecisionClaim):
        return judge_decision(t)
    return judge_search(t)


# ---------- decision-side Cantor for m >= 2^n ----------

class DecideWhenForced(cantor.Strategy):
    """Queries cells in a fixed order and claims as soon as the answer is determined.

    The matrix is certainly complete once every vector is a fixed row, and
    certainly incomplete once it is blocked.
    """

    def __init__(self, params: GameParams, order: Optional[Iterable[Query]] = None):
        if params.regime is not Regime.LARGE:
            raise InvalidParams("decision games need m >= 2^n")
        super().__init__(params)
        self.order = list(order) if order is not None else list(PartialMatrix(params).unknown_cells())

    def _run(self):
        L = PartialMatrix(self.params)
        for q in self.order:
            if L.is_complete():
                return DecisionClaim(True)
            if matching.is_unblocked(L) is None:
                return DecisionClaim(False, _free_vector(L))
            L.set_cell(q, (yield q))
        if L.is_complete():
            return DecisionClaim(True)
        return DecisionClaim(False, _free_vector(L))


def _free_vector(L: PartialMatrix) -> Optional[int]:
    for u in range(1 << L.n):
        if defeats_all_rows(L, u):
            return u
    return None


def random_order(params: GameParams, seed: int) -> list[Query]:
    cells = list(PartialMatrix(params).unknown_cells())
    random.Random(seed).shuffle(cells)
    return cells


# ---------- tables ----------

CSV_HEADER = ["n", "m", "scenario", "queries", "formula", "oracle", "winner"]
SCENARIOS = ("adaptive", "diagonal", "oblivious", "oblivious-tiny", "endgame", "zero_first")


@dataclass(frozen=True)
class Row:
    n: int
    m: int
    scenario: str
    queries: Optional[int]
    formula: Optional[int]
    oracle: Optional[int]
    winner: str

    def as_list(self) -> list:
        return [self.n, self.m, self.scenario, _blank(self.queries), _blank(self.formula), _blank(self.oracle), self.winner]


def _blank(x):
    return "" if x is None else x


def _oblivious_formula(params: GameParams) -> Optional[int]:
    try:
        d = cantor.block_size_closed_form(params.m, params.n)
    except ValueError:
        return None
    if d > params.n or not cantor.block_size_feasible(d, params.m, params.n):
        return None
    return params.m * d


def _try_oracle(fn, params: GameParams) -> Optional[int]:
    try:
        return fn(params)
    except (BudgetExceeded, InvalidParams):
        return None


def table_row(n: int, m: int, scenario: str, seed: int = 0) -> Optional[Row]:
    """One table row, or None when (n, m) is outside the scenario's regime."""
    params = GameParams(m, n)
    regime = params.regime
    if scenario in ("adaptive", "diagonal"):
        if scenario == "adaptive" and regime is not Regime.MID:
            return None
        if scenario == "diagonal" and regime is not Regime.SMALL:
            return None
        strat = cantor.AdaptiveStrategy(params) if scenario == "adaptive" else cantor.DiagonalStrategy(params)
        t = play_adaptive(strat, kronecker.BalancedAdversary(n), params)
        g = _try_oracle(oracle.adaptive_game_value, params)
        return Row(n, m, scenario, t.num_queries, cantor.adaptive_query_count(m, n), g, judge_search(t).value)
    if scenario == "oblivious":
        if regime is not Regime.MID:
            return None
        plan = cantor.oblivious_plan(params)
        t = play_oblivious(plan, cantor.plan_output, kronecker.CoveringAdversary(), params)
        f = _try_oracle(oracle.oblivious_game_value, params)
        return Row(n, m, scenario, t.num_queries, _oblivious_formula(params), f, judge_search(t).value)
    if scenario == "oblivious-tiny":
        if regime is Regime.LARGE:
            return None
        f = _try_oracle(oracle.oblivious_game_value, params)
        if f is None:
            return None
        formula = m if regime is Regime.SMALL else _oblivious_formula(params)
        return Row(n, m, scenario, None, formula, f, "")
    if scenario == "endgame":
        if not (1 << (n - 1)) <= m < (1 << n):
            return None
        plan = cantor.endgame_plan(params)
        t = play_oblivious(plan, cantor.plan_output, kronecker.CoveringAdversary(), params)
        if m == 1 << (n - 1) and n >= 2:
            formula = m * n - (1 << (n - 1))
        else:
            formula = m * n - ((1 << n) - m - 1)
        return Row(n, m, scenario, t.num_queries, formula, None, judge_search(t).value)
    if scenario == "zero_first":
        if regime is not Regime.LARGE:
            return None
        strat = DecideWhenForced(params, random_order(params, seed))
        t = play_adaptive(strat, kronecker.ZeroFirstAdversary(params), params)
        return Row(n, m, scenario, t.num_queries, m * n, None, judge_decision(t).value)
    raise InvalidParams(f"unknown scenario {scenario!r}")


def _cell(args):
    n, m, scenario, seed = args
    return table_row(n, m, scenario, seed)


def table(ns: Iterable[int], ms: Iterable[int], scenario: str, seed: int = 0, jobs: int = 1) -> list[Row]:
    """Rows for every (n, m) in the ranges that fits the scenario, sorted by (n, m)."""
    if scenario not in SCENARIOS:
        raise InvalidParams(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    cells = [(n, m, scenario, seed) for n in ns for m in ms]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell, cells))
    else:
        rows = [_cell(c) for c in cells]
    return sorted((r for r in rows if r is not None), key=lambda r: (r.n, r.m))


def to_csv(rows: Iterable[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_list())
    return buf.getvalue()
