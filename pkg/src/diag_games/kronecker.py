"""Kronecker's adversaries.

Every adversary answers one query at a time through ``answer(q)``. Adversaries
for the oblivious game also get ``observe_plan(plan)`` before any query.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cantor import QueryPlan
from .core import ENUM_MAX_N, GameError, GameParams, InvalidParams, PartialMatrix, Query, Regime
from . import matching


class Adversary:
    def observe_plan(self, plan: QueryPlan) -> None:
        pass

    def answer(self, q: Query) -> int:
        raise NotImplementedError


class ConstantAdversary(Adversary):
    """Always answers the same bit."""

    def __init__(self, bit: int = 0):
        self.bit = bit

    def answer(self, q: Query) -> int:
        return self.bit


class RandomAdversary(Adversary):
    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def answer(self, q: Query) -> int:
        return self._rng.randrange(2)


class BalancedAdversary(Adversary):
    """Keeps every column's zeros and ones within one of each other.

    Answers the bit seen less often so far in the queried column, 0 on ties.
    """

    def __init__(self, n: int):
        self.zeros = [0] * n
        self.ones = [0] * n

    def answer(self, q: Query) -> int:
        j = q.col
        if self.ones[j] < self.zeros[j]:
            self.ones[j] += 1
            return 1
        self.zeros[j] += 1
        return 0


# ---------- covering assignments ----------

@dataclass(frozen=True)
class CoveringAssignment:
    """Answer functions f_1..f_m, each stored as {column: bit} over J_i."""

    n: int
    functions: tuple[dict, ...]

    def agrees(self, i: int, v: int) -> bool:
        n = self.n
        return all(((v >> (n - 1 - j)) & 1) == b for j, b in self.functions[i].items())

    def agreeing_row(self, v: int) -> Optional[int]:
        for i in range(len(self.functions)):
            if self.agrees(i, v):
                return i
        return None

    def covers_all(self) -> bool:
        """Full 2^n scan of the covering property."""
        return all(self.agreeing_row(v) is not None for v in range(1 << self.n))

    def answer(self, q: Query) -> int:
        return self.functions[q.row][q.col]


def _projection_keys(vectors: np.ndarray, cols: list[int], n: int) -> np.ndarray:
    """Pattern of each vector on ``cols``, first column as the high bit."""
    keys = np.zeros(len(vectors), dtype=np.int64)
    for j in cols:
        keys = (keys << 1) | ((vectors >> (n - 1 - j)) & 1)
    return keys


def _pattern_to_function(pattern: int, cols: list[int]) -> dict:
    t = len(cols)
    return {j: (pattern >> (t - 1 - k)) & 1 for k, j in enumerate(cols)}


def greedy_covering(plan: QueryPlan) -> Optional[CoveringAssignment]:
    """Greedy covering assignment, or None if the greedy pass leaves a vector uncovered.

    Rows are taken by ascending |J_i| (ties by index). Each row takes the
    pattern matching the most still-uncovered vectors, smallest pattern on ties.
    """
    n = plan.n
    if n > ENUM_MAX_N:
        raise InvalidParams(f"n={n} exceeds the enumeration cap of {ENUM_MAX_N}")
    remaining = np.arange(1 << n, dtype=np.int64)
    functions: list[dict] = [dict() for _ in range(plan.m)]
    order = sorted(range(plan.m), key=lambda i: (len(plan.per_row[i]), i))
    for i in order:
        cols = sorted(plan.per_row[i])
        if len(remaining) == 0:
            functions[i] = {j: 0 for j in cols}
            continue
        keys = _projection_keys(remaining, cols, n)
        counts = np.bincount(keys, minlength=1 << len(cols))
        best = int(np.argmax(counts))
        functions[i] = _pattern_to_function(best, cols)
        remaining = remaining[keys != best]
    if len(remaining):
        return None
    return CoveringAssignment(n, tuple(functions))


EXACT_FALLBACK_MAX_N = 4


class CoveringAdversary(Adversary):
    """Answers an oblivious plan from a covering assignment when one exists.

    With a covering assignment, whatever Cantor outputs agrees with some row's
    answers, and that row can be completed to equal Cantor's vector. Greedy is
    tried first; for n <= 4 the exact search settles the cases greedy misses.
    Without an assignment every answer is 0.
    """

    def __init__(self):
        self.assignment: Optional[CoveringAssignment] = None

    def observe_plan(self, plan: QueryPlan) -> None:
        from .oracle import covering_exists

        assignment = greedy_covering(plan)
        if assignment is None and plan.n <= EXACT_FALLBACK_MAX_N:
            assignment = covering_exists(plan)
        self.assignment = assignment

    def answer(self, q: Query) -> int:
        if self.assignment is None:
            return 0
        return self.assignment.answer(q)

    def counterexample(self, u: int) -> Optional[int]:
        """Row whose answers agree with ``u``: Kronecker sets that row to ``u``."""
        if self.assignment is None:
            return None
        return self.assignment.agreeing_row(u)


# ---------- "0 first" for m >= 2^n ----------

class ZeroFirstAdversary(Adversary):
    """Answer 0 unless 0 would block the matrix, in which case answer 1.

    While at least 2^n rows remain untouched no answer can block, so the first
    m - 2^n answers skip the matching entirely. After that a saturating
    matching is kept and repaired once per answer.
    """

    def __init__(self, params: GameParams):
        if params.regime is not Regime.LARGE:
            raise InvalidParams(f"0-first needs m >= 2^n, got m={params.m}, n={params.n}")
        if params.n > ENUM_MAX_N:
            raise InvalidParams(f"n={params.n} exceeds the enumeration cap of {ENUM_MAX_N}")
        self.params = params
        self.L = PartialMatrix(params)
        self.steps = 0
        self._free_steps = params.m - (1 << params.n)
        self._state: Optional[matching.MatchingState] = None

    def answer(self, q: Query) -> int:
        self.steps += 1
        if self.steps <= self._free_steps:
            self.L.set_cell(q, 0)
            return 0
        if self._state is None:
            self._state = matching.is_unblocked(self.L)
            if self._state is None:
                raise GameError("0-first adversary reached a blocked matrix")
        for b in (0, 1):
            state = matching.try_set_and_repair(self._state, q, b)
            if state is not None:
                self._state = state
                self.L.set_cell(q, b)
                return b
        raise GameError("matrix was blocked before this answer")


def zero_first_answer(L: PartialMatrix, q: Query) -> int:
    """Stateless form of the 0-first rule; recomputes the matching from scratch."""
    state = matching.is_unblocked(L)
    if state is None:
        raise GameError("0-first rule applied to a blocked matrix")
    return 0 if matching.try_set_and_repair(state, q, 0) is not None else 1


def non_essential_rows_all_zero(L: PartialMatrix) -> bool:
    """True iff every fully known row other than 0^n occurs exactly once."""
    seen: dict[int, int] = {}
    for i in range(L.m):
        if not L.row_is_fixed(i):
            return False
        seen[L.vals[i]] = seen.get(L.vals[i], 0) + 1
    return all(count == 1 for v, count in seen.items() if v != 0)
