import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_completions
from diag_games import oracle
from diag_games.core import GameParams, InvalidParams, PartialMatrix, Query
from diag_games.matching import is_unblocked, try_set_and_repair


def brute_unblocked(L):
    target = set(range(1 << L.n))
    return any(target <= set(c) for c in all_completions(L))


def test_all_unknown_is_unblocked():
    for n, m in [(1, 2), (2, 4), (2, 7), (3, 8), (3, 10)]:
        S = is_unblocked(PartialMatrix(GameParams(m, n)))
        assert S is not None and S.is_valid()
        # initial matching puts vector k on row k
        assert S.row_of == list(range(1 << n))


def test_two_zero_rows_block():
    assert is_unblocked(PartialMatrix.from_rows(["0", "0"])) is None


def test_free_rows_cover_the_rest():
    S = is_unblocked(PartialMatrix.from_rows(["00", "01", "1*", "1*"]))
    assert S is not None and S.is_valid()
    assert {S.row_of[0b10], S.row_of[0b11]} == {2, 3}


def test_too_few_rows():
    assert is_unblocked(PartialMatrix(GameParams(3, 2))) is None


def test_cap():
    with pytest.raises(InvalidParams):
        is_unblocked(PartialMatrix(GameParams(5, 21)))


def test_repair_on_unmatched_row_keeps_matching():
    L = PartialMatrix(GameParams(5, 2))
    S = is_unblocked(L)
    S2 = try_set_and_repair(S, Query(4, 0), 1)
    assert S2.row_of == S.row_of


def test_repair_consistent_with_partner_keeps_matching():
    S = is_unblocked(PartialMatrix(GameParams(4, 2)))
    # row 3 holds vector 10; answering 1 in column 1 agrees with it
    S2 = try_set_and_repair(S, Query(2, 0), 1)
    assert S2.row_of == S.row_of
    assert S.L.num_known() == 0, "the input state must not change"


def test_repair_one_bit_two_rows():
    S = is_unblocked(PartialMatrix(GameParams(2, 1)))
    assert S.row_of == [0, 1]
    # row 2 loses vector 1, but row 1 is still free to take it
    S2 = try_set_and_repair(S, Query(1, 0), 0)
    assert S2 is not None and S2.row_of == [1, 0]
    assert brute_unblocked(S2.L)
    # pinning row 1 to 0 as well leaves nothing for vector 1
    assert try_set_and_repair(S2, Query(0, 0), 0) is None
    assert not brute_unblocked(PartialMatrix.from_rows(["0", "0"]))


def random_matrix(rng, n, m, p_known):
    L = PartialMatrix(GameParams(m, n))
    for i in range(m):
        for j in range(n):
            if rng.random() < p_known:
                L.set_cell(Query(i, j), rng.randrange(2))
    return L


@given(st.integers(1, 3), st.integers(1, 7), st.floats(0, 1), st.integers(0, 2**32))
@settings(max_examples=300, deadline=None)
def test_matches_completion_search(n, m, p_known, seed):
    L = random_matrix(random.Random(seed), n, m, p_known)
    S = is_unblocked(L)
    expected = oracle.completion_verdicts(L)[0]
    assert (S is not None) == expected
    if S is not None:
        assert S.is_valid()


@given(st.integers(1, 3), st.integers(0, 4), st.floats(0, 0.8), st.integers(0, 2**32))
@settings(max_examples=300, deadline=None)
def test_repair_matches_recompute(n, extra, p_known, seed):
    rng = random.Random(seed)
    L = random_matrix(rng, n, (1 << n) + extra, p_known)
    S = is_unblocked(L)
    unknown = list(L.unknown_cells())
    if S is None or not unknown:
        return
    q = rng.choice(unknown)
    b = rng.randrange(2)
    S2 = try_set_and_repair(S, q, b)
    after = L.copy().set_cell(q, b)
    assert (S2 is not None) == (is_unblocked(after) is not None) == oracle.completion_verdicts(after)[0]
    if S2 is not None:
        assert S2.is_valid() and S2.L == after


@given(st.integers(1, 2), st.integers(1, 4), st.floats(0, 1), st.integers(0, 2**32))
@settings(max_examples=150, deadline=None)
def test_realizable_sets_against_explicit_completions(n, m, p_known, seed):
    L = random_matrix(random.Random(seed), n, m, p_known)
    explicit = set()
    for c in all_completions(L):
        bits = 0
        for v in c:
            bits |= 1 << v
        explicit.add(bits)
    assert oracle.realizable_sets(L) == explicit
