"""Cantor's strategies.

Interactive strategies follow one protocol: ``next_query()`` returns either a
:class:`~diag_games.core.Query` or the final claim, and ``observe(bit)`` feeds
back Kronecker's answer to the last query. Oblivious strategies are plain
:class:`QueryPlan` objects plus an output function applied to the answers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Generator, Iterable, Iterator, Optional, Sequence

from .core import (
    Claim,
    GameError,
    GameParams,
    InvalidParams,
    PartialMatrix,
    Query,
    Regime,
    SearchClaim,
    bit_of,
    col_mask,
    defeats_all_rows,
)

ENUM_OUTPUT_MAX_N = 20


class InfeasiblePlan(GameError):
    """An oblivious plan left some group with every pattern realized."""


@dataclass(frozen=True)
class QueryPlan:
    """Column sets J_1..J_m, one per row (0-based columns)."""

    n: int
    per_row: tuple[frozenset, ...]

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "QueryPlan":
        per_row = tuple(frozenset(s) for s in sets)
        for J in per_row:
            if any(not 0 <= j < n for j in J):
                raise InvalidParams(f"column set {sorted(J)} outside [0,{n})")
        if not per_row:
            raise InvalidParams("a plan needs at least one row")
        return cls(n, per_row)

    @property
    def m(self) -> int:
        return len(self.per_row)

    @property
    def total_size(self) -> int:
        return sum(len(J) for J in self.per_row)

    def queries(self) -> Iterator[Query]:
        for i, J in enumerate(self.per_row):
            for j in sorted(J):
                yield Query(i, j)

    def groups(self) -> list[tuple[tuple[int, ...], list[int]]]:
        """Group rows sharing a column block; blocks must be pairwise disjoint.

        Returns ``(block, rows)`` pairs ordered by first row. Rows with an empty
        set are left out: nothing can be said about them.
        """
        by_block: dict[frozenset, list[int]] = {}
        for i, J in enumerate(self.per_row):
            if J:
                by_block.setdefault(J, []).append(i)
        blocks = list(by_block)
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                if blocks[a] & blocks[b]:
                    raise InfeasiblePlan("plan blocks overlap; not a block-partition plan")
        return [(tuple(sorted(J)), rows) for J, rows in by_block.items()]

    def omission_counts(self) -> list[int]:
        """How many rows leave each column unqueried."""
        return [sum(1 for J in self.per_row if j not in J) for j in range(self.n)]

    def one_based(self) -> list[list[int]]:
        return [[j + 1 for j in sorted(J)] for J in self.per_row]


# ---------- interactive protocol ----------

class Strategy:
    """Adapter turning a generator into the next_query/observe protocol.

    Subclasses implement ``_run``, a generator that yields queries, receives
    answers via ``send`` and returns the claim.
    """

    def __init__(self, params: GameParams):
        self.params = params
        self._gen: Optional[Generator] = None
        self._query: Optional[Query] = None
        self._claim: Optional[Claim] = None

    def _run(self) -> Generator[Query, int, Claim]:
        raise NotImplementedError

    def _advance(self, value: Optional[int]) -> None:
        try:
            self._query = self._gen.send(value)
        except StopIteration as stop:
            self._query = None
            self._claim = stop.value

    def next_query(self):
        if self._claim is not None:
            return self._claim
        if self._gen is None:
            self._gen = self._run()
            self._advance(None)
        return self._query if self._query is not None else self._claim

    def observe(self, bit: int) -> None:
        if self._query is None:
            raise GameError("observe() called with no outstanding query")
        self._advance(bit)


def _diagonal(rows: Sequence[int], first_col: int, u: list[int]):
    """Sub-generator: negate the diagonal of ``rows`` starting at ``first_col``."""
    for k, i in enumerate(rows):
        b = yield Query(i, first_col + k)
        u[first_col + k] = 1 - b


def _vector(u: list[int]) -> int:
    v = 0
    for b in u:
        v = (v << 1) | b
    return v


class DiagonalStrategy(Strategy):
    """Query (i, i) for every row; answer with the negated diagonal."""

    def __init__(self, params: GameParams):
        if params.regime is not Regime.SMALL:
            raise InvalidParams(f"diagonalization needs m <= n, got m={params.m}, n={params.n}")
        super().__init__(params)

    def _run(self):
        u = [0] * self.params.n
        yield from _diagonal(range(self.params.m), 0, u)
        return SearchClaim(_vector(u))


def choose_x(m: int, n: int) -> int:
    """Rows to eliminate at the current coordinate when ``n < m < 2**n``."""
    if not n < m < (1 << n):
        raise InvalidParams(f"choose_x needs n < m < 2^n, got m={m}, n={n}")
    half = 1 << (n - 1)
    return 1 if m <= half else m - half + 1


class AdaptiveStrategy(Strategy):
    """The 2m - n strategy for n < m < 2^n.

    At each coordinate, query the first 2x - 1 alive rows, set the bit of u
    against the majority answer and drop x of the majority rows; once the
    alive rows fit on the remaining columns, finish by diagonalization.
    """

    def __init__(self, params: GameParams):
        if params.regime is not Regime.MID:
            raise InvalidParams(f"adaptive strategy needs n < m < 2^n, got m={params.m}, n={params.n}")
        super().__init__(params)
        self.levels: list[tuple[int, int, int]] = []  # (column, x, majority bit)

    def _run(self):
        n = self.params.n
        alive = list(range(self.params.m))
        u = [0] * n
        col = 0
        while len(alive) > n - col:
            x = choose_x(len(alive), n - col)
            asked = alive[: 2 * x - 1]
            answers = []
            for i in asked:
                answers.append((yield Query(i, col)))
            eps = 1 if sum(answers) >= x else 0
            u[col] = 1 - eps
            # tie-break: drop the x lowest-indexed rows holding the majority bit
            drop = [i for i, b in zip(asked, answers) if b == eps][:x]
            dropped = set(drop)
            alive = [i for i in alive if i not in dropped]
            self.levels.append((col, x, eps))
            col += 1
        yield from _diagonal(alive, col, u)
        return SearchClaim(_vector(u))


def adaptive_query_count(m: int, n: int) -> int:
    """Closed-form optimal adaptive count: m for m <= n, 2m - n below 2^n."""
    if m <= n:
        return m
    if m < (1 << n):
        return 2 * m - n
    return m * n


# ---------- oblivious block-partition plan ----------

def block_size_closed_form(m: int, n: int) -> int:
    r = 2 * m / n
    return math.ceil(math.log2(r) + 2 * math.log2(math.log2(r)) + 1)


def block_size_feasible(d: int, m: int, n: int) -> bool:
    """2^d > 2md/n, checked in exact integer arithmetic."""
    return (1 << d) * n > 2 * m * d


def oblivious_block_d(params: GameParams) -> int:
    """Block size d for the block-partition plan.

    Starts at the closed form and moves up until ``2^d > 2md/n``; raises
    :class:`InfeasiblePlan` if that never happens with ``d <= n``.
    """
    m, n = params.m, params.n
    if params.regime is not Regime.MID:
        raise InvalidParams(f"block plan needs n < m < 2^n, got m={m}, n={n}")
    d = block_size_closed_form(m, n)
    while d <= n:
        if block_size_feasible(d, m, n):
            return d
        d += 1
    raise InfeasiblePlan(f"no block size d <= {n} satisfies 2^d > 2md/n for m={m}")


def block_plan(params: GameParams, d: int) -> QueryPlan:
    m, n = params.m, params.n
    k = n // d
    if k < 1:
        raise InfeasiblePlan(f"block size {d} exceeds n={n}")
    blocks = [frozenset(range(b * d, (b + 1) * d)) for b in range(k)]
    # balanced partition: the first m % k groups get one extra row
    base, extra = divmod(m, k)
    per_row = []
    for g in range(k):
        per_row.extend([blocks[g]] * (base + (1 if g < extra else 0)))
    return QueryPlan(n, tuple(per_row))


def successor_plan(params: GameParams) -> QueryPlan:
    """The m = n + 1 plan: three rows on the first two columns, diagonal for the rest."""
    m, n = params.m, params.n
    if m != n + 1 or n < 2:
        raise InvalidParams("successor plan needs m = n + 1 and n >= 2")
    head = frozenset({0, 1})
    per_row = [head, head, head] + [frozenset({c}) for c in range(2, n)]
    return QueryPlan(n, tuple(per_row))


def full_plan(params: GameParams) -> QueryPlan:
    return QueryPlan(params.n, tuple(frozenset(range(params.n)) for _ in range(params.m)))


def oblivious_plan(params: GameParams) -> QueryPlan:
    """The oblivious plan Cantor actually uses for n < m < 2^n.

    m = n + 1 gets the successor plan; otherwise the block plan with the
    closed-form block size when it is feasible; otherwise the endgame plan
    when m >= 2^(n-1), and querying everything as the last resort.
    """
    if params.regime is not Regime.MID:
        raise InvalidParams(f"oblivious plan needs n < m < 2^n, got m={params.m}, n={params.n}")
    if params.m == params.n + 1:
        return successor_plan(params)
    try:
        return block_plan(params, oblivious_block_d(params))
    except InfeasiblePlan:
        pass
    if params.m >= 1 << (params.n - 1):
        return endgame_plan(params)
    return full_plan(params)


def oblivious_output(plan: QueryPlan, answers: PartialMatrix) -> int:
    """Cantor's vector for a block-partition plan.

    Each block of u gets the smallest pattern realized by none of the rows
    assigned to it; coordinates outside every block stay 0.
    """
    n = plan.n
    u = 0
    for block, rows in plan.groups():
        d = len(block)
        realized = set()
        for i in rows:
            pattern = 0
            for j in block:
                if not answers.mask[i] & col_mask(j, n):
                    raise GameError(f"answer for ({i + 1},{j + 1}) is missing")
                pattern = (pattern << 1) | bit_of(answers.vals[i], j, n)
            realized.add(pattern)
        free = next((p for p in range(1 << d) if p not in realized), None)
        if free is None:
            raise InfeasiblePlan(f"all {1 << d} patterns on block {[j + 1 for j in block]} are realized")
        for k, j in enumerate(block):
            if (free >> (d - 1 - k)) & 1:
                u |= col_mask(j, n)
    return u


def first_uncovered(plan: QueryPlan, answers: PartialMatrix) -> Optional[int]:
    """Smallest u that every row's answers rule out, or None.

    Works for any plan shape (endgame plans in particular) by scanning {0,1}^n.
    """
    n = plan.n
    if n > ENUM_OUTPUT_MAX_N:
        raise InvalidParams(f"n={n} too large to scan {{0,1}}^n")
    for u in range(1 << n):
        if defeats_all_rows(answers, u):
            return u
    return None


def plan_output(plan: QueryPlan, answers: PartialMatrix) -> int:
    """Output for whatever plan :func:`oblivious_plan` or :func:`endgame_plan` emitted."""
    try:
        return oblivious_output(plan, answers)
    except InfeasiblePlan:
        u = first_uncovered(plan, answers)
        if u is None:
            raise
        return u


# ---------- endgame plans for 2^(n-1) <= m < 2^n ----------

def endgame_plan(params: GameParams, parity_variant: Optional[bool] = None) -> QueryPlan:
    """Sparse plan leaving a few cells unqueried.

    The default leaves ``d = 2^n - m - 1`` cells open, one per row in rows
    1..d, column 1. At ``m = 2^(n-1)`` (n >= 2) the parity variant is used by
    default: every row skips one column, rows 1..m-1 skip column 1 and row m
    skips column 2, so column 1 is skipped an odd number of times.
    """
    m, n = params.m, params.n
    lo = 1 << (n - 1)
    if not lo <= m < (1 << n):
        raise InvalidParams(f"endgame plan needs 2^(n-1) <= m < 2^n, got m={m}, n={n}")
    if parity_variant is None:
        parity_variant = m == lo and n >= 2
    if parity_variant:
        if m != lo or n < 2:
            raise InvalidParams("parity variant needs m = 2^(n-1) and n >= 2")
        everything = frozenset(range(n))
        per_row = [everything - {0}] * (m - 1) + [everything - {1}]
        return QueryPlan(n, tuple(per_row))
    d = (1 << n) - m - 1
    everything = frozenset(range(n))
    per_row = [everything - {0}] * d + [everything] * (m - d)
    return QueryPlan(n, tuple(per_row))


class ObliviousStrategy(Strategy):
    """A fixed plan replayed through the interactive protocol."""

    def __init__(self, params: GameParams, plan: QueryPlan, output=plan_output):
        if plan.m != params.m or plan.n != params.n:
            raise InvalidParams("plan shape does not match the game")
        super().__init__(params)
        self._plan = plan
        self._output = output

    def plan(self) -> QueryPlan:
        return self._plan

    def _run(self):
        answers = PartialMatrix(self.params)
        for q in self._plan.queries():
            answers.set_cell(q, (yield q))
        return SearchClaim(self._output(self._plan, answers))
