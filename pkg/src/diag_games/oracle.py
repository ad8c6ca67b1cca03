"""Exhaustive ground truth for tiny instances.

Nothing here shares code paths with the strategies or adversaries it checks.
Every search has a hard budget and raises :class:`BudgetExceeded` instead of
truncating.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .cantor import QueryPlan
from .core import BudgetExceeded, GameParams, InvalidParams, PartialMatrix, Regime
from .kronecker import CoveringAssignment

log = logging.getLogger(__name__)

COVERING_MAX_N = 12
COVERING_MAX_LOG_TUPLES = 24


def _cube_bits(n: int, cols: Sequence[int], pattern: int) -> int:
    """Bitset over {0,1}^n of the vectors equal to ``pattern`` on ``cols``."""
    t = len(cols)
    out = 0
    for v in range(1 << n):
        if all(((v >> (n - 1 - j)) & 1) == ((pattern >> (t - 1 - k)) & 1) for k, j in enumerate(cols)):
            out |= 1 << v
    return out


def covering_exists(plan: QueryPlan) -> Optional[CoveringAssignment]:
    """Search every tuple of answer functions for a covering assignment.

    A plan whose cubes are too small to cover {0,1}^n even if disjoint is
    rejected by counting before any search. Otherwise the search space,
    the product of 2^|J_i|, must stay within 2^24.
    """
    n = plan.n
    if n > COVERING_MAX_N:
        raise BudgetExceeded(f"n={n} exceeds the covering search cap of {COVERING_MAX_N}")
    sets = [sorted(J) for J in plan.per_row]
    target = (1 << (1 << n)) - 1
    capacity = [1 << (n - len(J)) for J in sets]
    if sum(capacity) < 1 << n:
        return None
    if plan.total_size > COVERING_MAX_LOG_TUPLES:
        raise BudgetExceeded(
            f"covering search over 2^{plan.total_size} assignment tuples exceeds 2^{COVERING_MAX_LOG_TUPLES}"
        )
    # biggest cubes first so the capacity bound bites early
    order = sorted(range(plan.m), key=lambda i: len(sets[i]))
    cubes = [[_cube_bits(n, sets[i], p) for p in range(1 << len(sets[i]))] for i in order]
    suffix_cap = [0] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        suffix_cap[k] = suffix_cap[k + 1] + capacity[order[k]]
    chosen = [0] * len(order)

    def search(k: int, covered: int) -> bool:
        if covered == target:
            return True
        if k == len(order):
            return False
        missing = (1 << n) - bin(covered).count("1")
        if suffix_cap[k] < missing:
            return False
        for p, cube in enumerate(cubes[k]):
            chosen[k] = p
            if search(k + 1, covered | cube):
                return True
        return False

    if not search(0, 0):
        return None
    functions: list[dict] = [dict() for _ in range(plan.m)]
    for k, i in enumerate(order):
        t = len(sets[i])
        functions[i] = {j: (chosen[k] >> (t - 1 - pos)) & 1 for pos, j in enumerate(sets[i])}
    # rows past the point where coverage completed keep whatever pattern they hold; extra cubes only add
    return CoveringAssignment(n, tuple(functions))


# ---------- oblivious game value ----------

OBLIVIOUS_MAX_N = 3
OBLIVIOUS_MAX_M = 6


def oblivious_game_value(params: GameParams) -> int:
    """f(n, m): the smallest total plan size with no covering assignment.

    Rows are interchangeable, so plans are enumerated as multisets of column
    sets in order of total size.
    """
    m, n = params.m, params.n
    if n > OBLIVIOUS_MAX_N or m > OBLIVIOUS_MAX_M:
        raise BudgetExceeded(f"f({n},{m}) is beyond the exhaustive budget (n<={OBLIVIOUS_MAX_N}, m<={OBLIVIOUS_MAX_M})")
    if params.regime is Regime.LARGE:
        raise InvalidParams("f(n, m) is defined for m < 2^n")
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    by_size: dict[int, list[tuple[frozenset, ...]]] = {}
    for combo in itertools.combinations_with_replacement(subsets, m):
        by_size.setdefault(sum(len(J) for J in combo), []).append(combo)
    for size in sorted(by_size):
        for combo in by_size[size]:
            if covering_exists(QueryPlan(n, combo)) is None:
                return size
    raise AssertionError("querying everything always wins for m < 2^n")


# ---------- adaptive game value ----------

ADAPTIVE_MAX_N = 3
ADAPTIVE_MAX_M = 5


def adaptive_game_value(params: GameParams) -> int:
    """g(n, m) by exact minimax over the query game.

    A state is the multiset of rows, each row a (queried mask, answers) pair;
    rows are sorted before memoizing since Kronecker has committed to nothing
    that tells them apart. Cantor may stop once some u differs from every row
    on a queried bit; otherwise he picks an unknown cell and Kronecker picks
    the answer.
    """
    m, n = params.m, params.n
    if n > ADAPTIVE_MAX_N or m > ADAPTIVE_MAX_M:
        raise BudgetExceeded(f"g({n},{m}) is beyond the exhaustive budget (n<={ADAPTIVE_MAX_N}, m<={ADAPTIVE_MAX_M})")
    if params.regime is Regime.LARGE:
        raise InvalidParams("g(n, m) is defined for m < 2^n")
    everything = (1 << (1 << n)) - 1

    @lru_cache(maxsize=None)
    def cube(mask: int, vals: int) -> int:
        out = 0
        for v in range(1 << n):
            if (v ^ vals) & mask == 0:
                out |= 1 << v
        return out

    @lru_cache(maxsize=None)
    def value(state: tuple[tuple[int, int], ...]) -> int:
        covered = 0
        for mask, vals in state:
            covered |= cube(mask, vals)
        if covered != everything:
            return 0
        best = None
        tried = set()
        for idx, (mask, vals) in enumerate(state):
            if (mask, vals) in tried:
                continue  # identical rows give identical moves
            tried.add((mask, vals))
            for j in range(n):
                bit = 1 << (n - 1 - j)
                if mask & bit:
                    continue
                worst = 0
                for b in (0, 1):
                    row = (mask | bit, vals | (bit if b else 0))
                    child = tuple(sorted(state[:idx] + (row,) + state[idx + 1:]))
                    worst = max(worst, value(child))
                    if best is not None and worst + 1 >= best:
                        break
                if best is None or worst + 1 < best:
                    best = worst + 1
        assert best is not None, "a fully queried matrix with m < 2^n always has a free vector"
        return best

    return value(tuple([(0, 0)] * m))


# ---------- completions ----------

COMPLETION_MAX_N = 4


def realizable_sets(L: PartialMatrix) -> set[int]:
    """All sets of vectors (as bitsets over {0,1}^n) realized by some completion of L.

    Folds the rows one at a time, so the work is bounded by the number of
    distinct sets rather than the number of completions.
    """
    n = L.n
    if n > COMPLETION_MAX_N:
        raise BudgetExceeded(f"n={n} exceeds the completion enumeration cap of {COMPLETION_MAX_N}")
    sets = {0}
    for i in range(L.m):
        options = [v for v in range(1 << n) if L.row_compatible(i, v)]
        sets = {s | (1 << v) for s in sets for v in options}
    return sets


def completion_verdicts(L: PartialMatrix) -> tuple[bool, bool]:
    """(some completion contains {0,1}^n, some completion misses a vector)."""
    everything = (1 << (1 << L.n)) - 1
    sets = realizable_sets(L)
    return everything in sets, any(s != everything for s in sets)


def some_completion_contains(L: PartialMatrix, u: int) -> bool:
    """Brute force: is there a completion of L with a row equal to u?"""
    return any(s >> u & 1 for s in realizable_sets(L))


# ---------- hypercube matchings and cube covers ----------

HYPERCUBE_MAX_N = 4


def edge_matching(directions: Iterable[int], n: int) -> Optional[list[tuple[int, int]]]:
    """Pairwise disjoint edges of {0,1}^n, the k-th one in direction ``directions[k]``.

    Directions are 0-based columns. Returns the edges (lower endpoint first)
    in the order of ``directions``, or None when no such matching exists.
    """
    dirs = list(directions)
    if n > HYPERCUBE_MAX_N:
        raise BudgetExceeded(f"n={n} exceeds the hypercube search cap of {HYPERCUBE_MAX_N}")
    if any(not 0 <= j < n for j in dirs):
        raise InvalidParams(f"directions must lie in [0,{n})")
    if len(dirs) > 1 << (n - 1):
        return None
    order = sorted(range(len(dirs)), key=lambda k: dirs[k])
    edges_by_dir = {}
    for j in set(dirs):
        bit = 1 << (n - 1 - j)
        edges_by_dir[j] = [(v, v | bit) for v in range(1 << n) if not v & bit]
    need = Counter(dirs)
    picked: list[tuple[int, int]] = [None] * len(dirs)

    def free_count(j: int, used: int) -> int:
        return sum(1 for a, b in edges_by_dir[j] if not (used >> a) & 1 and not (used >> b) & 1)

    def search(pos: int, used: int, start: int, left: Counter) -> bool:
        if pos == len(order):
            return True
        j = dirs[order[pos]]
        if start == 0 and any(free_count(d, used) < c for d, c in left.items() if c):
            return False
        edges = edges_by_dir[j]
        for e in range(start, len(edges)):
            a, b = edges[e]
            if (used >> a) & 1 or (used >> b) & 1:
                continue
            picked[order[pos]] = (a, b)
            left[j] -= 1
            # same direction next: keep edge indices increasing to skip permutations
            nxt_start = e + 1 if pos + 1 < len(order) and dirs[order[pos + 1]] == j else 0
            if search(pos + 1, used | (1 << a) | (1 << b), nxt_start, left):
                return True
            left[j] += 1
        return False

    if search(0, 0, 0, Counter(need)):
        return list(picked)
    return None


def parity_obstructed(directions: Iterable[int], n: int) -> bool:
    """True when a perfect direction matching is ruled out by an odd multiplicity."""
    dirs = list(directions)
    return len(dirs) == 1 << (n - 1) and any(c % 2 for c in Counter(dirs).values())


def cube_bits(n: int, free: Iterable[int], base: int) -> int:
    """Bitset of the cube with the ``free`` columns open and the rest taken from ``base``."""
    free = list(free)
    fixed = ((1 << n) - 1) & ~sum(1 << (n - 1 - j) for j in free)
    out = 0
    for v in range(1 << n):
        if (v ^ base) & fixed == 0:
            out |= 1 << v
    return out


def cube_cover_search(sets: Sequence[Iterable[int]], n: int) -> Optional[list[tuple[tuple[int, ...], int]]]:
    """Place a J_i-cube for every set so that the union has at least d + q vectors.

    ``d`` is the total size of the sets and ``q`` their number. Returns
    ``(J_i, base)`` placements where ``base`` has zeros on ``J_i``, or None.
    A None here would be a counterexample to the open conjecture this search
    probes, so it is logged at warning level.
    """
    Js = [tuple(sorted(J)) for J in sets]
    if n > HYPERCUBE_MAX_N:
        raise BudgetExceeded(f"n={n} exceeds the hypercube search cap of {HYPERCUBE_MAX_N}")
    if any(not J for J in Js):
        raise InvalidParams("every set must be nonempty")
    if any(not 0 <= j < n for J in Js for j in J):
        raise InvalidParams(f"columns must lie in [0,{n})")
    d = sum(len(J) for J in Js)
    q = len(Js)
    target = d + q
    order = sorted(range(q), key=lambda k: -len(Js[k]))
    options = []
    for k in order:
        J = Js[k]
        open_mask = sum(1 << (n - 1 - j) for j in J)
        bases = [v for v in range(1 << n) if not v & open_mask]
        options.append([(base, cube_bits(n, J, base)) for base in bases])
    suffix = [0] * (q + 1)
    for k in range(q - 1, -1, -1):
        suffix[k] = suffix[k + 1] + (1 << len(Js[order[k]]))
    chosen = [0] * q

    def search(k: int, union: int) -> bool:
        size = bin(union).count("1")
        if size >= target:
            return True
        if k == q or size + suffix[k] < target:
            return False
        seen = set()
        for base, bits in options[k]:
            if bits in seen:
                continue
            seen.add(bits)
            chosen[k] = base
            if search(k + 1, union | bits):
                return True
        return False

    if search(0, 0):
        placements: list[Optional[tuple[tuple[int, ...], int]]] = [None] * q
        for pos, k in enumerate(order):
            placements[k] = (Js[k], chosen[pos])
        return placements
    if d < 1 << (n - 1):
        log.warning("cube cover search found no placement for %s at n=%d (d=%d, q=%d)", Js, n, d, q)
    return None
