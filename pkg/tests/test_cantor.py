import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import MatrixAdversary, ScriptedAdversary
from diag_games import cantor, engine, kronecker
from diag_games.cantor import (
    AdaptiveStrategy,
    DiagonalStrategy,
    InfeasiblePlan,
    QueryPlan,
    block_size_closed_form,
    block_size_feasible,
    choose_x,
    endgame_plan,
    oblivious_block_d,
    oblivious_output,
    oblivious_plan,
)
from diag_games.core import GameParams, InvalidParams, PartialMatrix, Query, SearchClaim, to_str

FIG3 = ["011010", "100111", "111000", "010110", "110101", "011111"]


def run(strategy, adversary, params):
    t = engine.play_adaptive(strategy, adversary, params)
    return t, engine.judge_search(t)


# ---------- diagonalization ----------

def test_diagonal_three_of_six():
    p = GameParams(3, 6)
    adv = ScriptedAdversary([0, 0, 1])
    t, winner = run(DiagonalStrategy(p), adv, p)
    assert adv.asked == [Query(0, 0), Query(1, 1), Query(2, 2)]
    assert to_str(t.claim.u, 6) == "110000"
    assert winner == "cantor"


def test_diagonal_single_bit():
    p = GameParams(1, 1)
    t, winner = run(DiagonalStrategy(p), ScriptedAdversary([0]), p)
    assert t.claim == SearchClaim(1) and winner == "cantor"


def test_diagonal_figure_matrix():
    p = GameParams(6, 6)
    t, winner = run(DiagonalStrategy(p), MatrixAdversary(FIG3), p)
    assert to_str(t.claim.u, 6) == "110010"
    assert all(to_str(t.claim.u, 6) != row for row in FIG3)
    assert t.num_queries == 6


def test_diagonal_regime_check():
    with pytest.raises(InvalidParams):
        DiagonalStrategy(GameParams(4, 3))


# ---------- adaptive recursion ----------

@pytest.mark.parametrize("m,n,x", [(4, 3, 1), (7, 3, 4), (5, 3, 2)])
def test_choose_x_examples(m, n, x):
    assert choose_x(m, n) == x


def test_choose_x_invariants():
    for n in range(2, 13):
        for m in range(n + 1, 1 << n):
            x = choose_x(m, n)
            assert 1 <= x <= math.ceil(m / 2)
            assert n - 1 <= m - x < 1 << (n - 1)
            assert 2 * x - 1 <= m


@pytest.mark.parametrize("m,n", [(3, 3), (8, 3), (2, 3)])
def test_choose_x_outside_mid(m, n):
    with pytest.raises(InvalidParams):
        choose_x(m, n)


def test_adaptive_trace_four_of_three():
    p = GameParams(4, 3)
    strat = AdaptiveStrategy(p)
    t, winner = run(strat, kronecker.BalancedAdversary(3), p)
    assert t.num_queries == 5
    assert [x for _, x, _ in strat.levels] == [1, 2]
    # 1 query on column 1, 3 on column 2, then 1 diagonal query on column 3
    assert [q.col for q, _ in t.events] == [0, 1, 1, 1, 2]
    assert winner == "cantor"


def test_adaptive_seven_of_three():
    p = GameParams(7, 3)
    t, winner = run(AdaptiveStrategy(p), kronecker.BalancedAdversary(3), p)
    assert t.num_queries == 11 and winner == "cantor"


def test_adaptive_majority_level():
    # n=2, m=3: x=2, three queries on column 1 answered (1,1,0)
    p = GameParams(3, 2)
    strat = AdaptiveStrategy(p)
    adv = ScriptedAdversary([1, 1, 0, 0])
    t, winner = run(strat, adv, p)
    assert strat.levels[0] == (0, 2, 1)
    assert (t.claim.u >> 1) & 1 == 0  # first bit of u is 1 - majority
    # rows 1 and 2 are dropped, so the tail query goes to row 3
    assert adv.asked[3] == Query(2, 1)
    assert winner == "cantor"


def test_adaptive_regime_check():
    with pytest.raises(InvalidParams):
        AdaptiveStrategy(GameParams(3, 3))
    with pytest.raises(InvalidParams):
        AdaptiveStrategy(GameParams(8, 3))


mid_params = st.integers(2, 9).flatmap(lambda n: st.tuples(st.integers(n + 1, (1 << n) - 1), st.just(n)))


@given(mid_params, st.integers(0, 2**32))
@settings(max_examples=150, deadline=None)
def test_adaptive_count_and_win_against_random(mn, seed):
    m, n = mn
    p = GameParams(m, n)
    t, winner = run(AdaptiveStrategy(p), kronecker.RandomAdversary(seed), p)
    assert t.num_queries == 2 * m - n
    assert winner == "cantor"


# ---------- oblivious block plan ----------

def test_block_d_small():
    assert oblivious_block_d(GameParams(6, 4)) == 4
    assert block_size_feasible(4, 6, 4)  # 16 > 12


def test_block_d_formula_large_parameters():
    # n=64 is over the global cap, so the closed form is checked directly
    assert block_size_closed_form(256, 64) == 8
    assert block_size_feasible(8, 256, 64)


@given(st.integers(1, 25), st.integers(2, 200), st.integers(1, 200))
def test_feasibility_predicate_equivalence(d, m, n):
    assert block_size_feasible(d, m, n) == (Fraction(2**d, d) > Fraction(2 * m, n))


def test_block_d_infeasible():
    with pytest.raises(InfeasiblePlan):
        oblivious_block_d(GameParams(7, 4))


def test_block_plan_one_group():
    plan = oblivious_plan(GameParams(6, 4))
    assert plan.per_row == (frozenset({0, 1, 2, 3}),) * 6
    assert plan.total_size == 24


def test_successor_plan():
    plan = oblivious_plan(GameParams(7, 6))
    assert plan.one_based() == [[1, 2]] * 3 + [[3], [4], [5], [6]]
    assert plan.total_size == 10


def test_block_plan_group_sizes():
    for n in range(4, 31, 3):
        for m in sorted({n + 2, 2 * n, 5 * n, 40 * n}):
            p = GameParams(m, n)
            try:
                d = oblivious_block_d(p)
            except (InfeasiblePlan, InvalidParams):
                continue
            plan = cantor.block_plan(p, d)
            assert plan.total_size == m * d
            sizes = [len(rows) for _, rows in plan.groups()]
            assert len(sizes) == n // d
            assert max(sizes) - min(sizes) <= 1
            assert max(sizes) <= math.ceil(m / (n // d)) <= 2 * m * d / n
            blocks = [set(b) for b, _ in plan.groups()]
            assert all(len(b) == d for b in blocks)
            assert sum(len(b) for b in blocks) == len(set().union(*blocks))


def test_oblivious_output_missing_pattern():
    plan = QueryPlan.from_sets(2, [{0, 1}] * 3)
    L = PartialMatrix.from_rows(["00", "01", "10"])
    assert oblivious_output(plan, L) == 0b11


def test_oblivious_output_single_bit():
    plan = QueryPlan.from_sets(1, [{0}])
    assert oblivious_output(plan, PartialMatrix.from_rows(["0"])) == 1


def test_oblivious_output_all_patterns_realized():
    plan = QueryPlan.from_sets(2, [{0, 1}] * 4)
    with pytest.raises(InfeasiblePlan):
        oblivious_output(plan, PartialMatrix.from_rows(["00", "01", "10", "11"]))


@given(st.integers(5, 30).flatmap(lambda n: st.tuples(st.integers(n + 1, min((1 << n) - 1, 400)), st.just(n))), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_oblivious_plan_wins_against_random_answers(mn, seed):
    m, n = mn
    p = GameParams(m, n)
    plan = oblivious_plan(p)
    t = engine.play_oblivious(plan, cantor.plan_output, kronecker.RandomAdversary(seed), p)
    assert engine.judge_search(t) == "cantor"
    if m != n + 1:
        try:
            d = oblivious_block_d(p)
        except InfeasiblePlan:
            return
        assert plan.total_size == m * d


# ---------- endgame ----------

def test_endgame_five_of_three():
    plan = endgame_plan(GameParams(5, 3))
    assert plan.total_size == 13
    assert plan.omission_counts() == [2, 0, 0]
    # at most (m - d) + 2d = 7 < 8 vectors can be covered
    assert sum(1 << (3 - len(J)) for J in plan.per_row) == 7


def test_endgame_no_slack():
    plan = endgame_plan(GameParams(7, 3))
    assert plan.total_size == 21


def test_endgame_parity_variant():
    plan = endgame_plan(GameParams(4, 3))
    assert plan.total_size == 8
    assert plan.omission_counts() == [3, 1, 0]
    assert any(c % 2 for c in plan.omission_counts())
    assert all(len(J) == 2 for J in plan.per_row)


def test_endgame_default_at_half():
    plan = endgame_plan(GameParams(4, 3), parity_variant=False)
    assert plan.total_size == 12 - 3


def test_endgame_regime():
    with pytest.raises(InvalidParams):
        endgame_plan(GameParams(3, 3))
    with pytest.raises(InvalidParams):
        endgame_plan(GameParams(8, 3))


def test_oblivious_strategy_protocol():
    p = GameParams(6, 4)
    strat = cantor.ObliviousStrategy(p, oblivious_plan(p))
    assert strat.plan().total_size == 24
    t = engine.play_adaptive(strat, kronecker.BalancedAdversary(4), p)
    assert t.num_queries == 24 and engine.judge_search(t) == "cantor"
