"""Blocked/unblocked certification for the m >= 2^n game.

A partial matrix L is unblocked when its unknown cells can be filled so that
every vector of {0,1}^n appears among the rows. That holds exactly when the
bipartite graph joining each row to the vectors it can still become has a
matching saturating the vector side. The matching is kept as a witness and
repaired with a single augmenting-path search after each answered cell.
"""
from __future__ import annotations

from collections import deque
from typing import Optional

from .core import ENUM_MAX_N, InvalidParams, PartialMatrix, Query, bit_of


class MatchingState:
    """A matching from every vector of {0,1}^n to a distinct compatible row of ``L``.

    ``row_of[v]`` is the row matched to vector ``v``; ``vec_of[i]`` is the
    vector matched to row ``i`` or -1. ``L`` is owned by the state and must not
    be mutated behind its back.
    """

    __slots__ = ("L", "row_of", "vec_of")

    def __init__(self, L: PartialMatrix, row_of: list[int], vec_of: list[int]):
        self.L = L
        self.row_of = row_of
        self.vec_of = vec_of

    @property
    def matched(self) -> dict[int, int]:
        return dict(enumerate(self.row_of))

    def useful_rows(self) -> list[int]:
        return sorted(self.row_of)

    def copy(self) -> "MatchingState":
        return MatchingState(self.L.copy(), list(self.row_of), list(self.vec_of))

    def is_valid(self) -> bool:
        n = self.L.n
        if len(self.row_of) != 1 << n or len(set(self.row_of)) != len(self.row_of):
            return False
        for v, i in enumerate(self.row_of):
            if i < 0 or self.vec_of[i] != v or not self.L.row_compatible(i, v):
                return False
        return sum(1 for v in self.vec_of if v >= 0) == 1 << n


def _check_cap(L: PartialMatrix) -> None:
    if L.n > ENUM_MAX_N:
        raise InvalidParams(f"n={L.n} exceeds the enumeration cap of {ENUM_MAX_N}")


def _augment(L: PartialMatrix, row_of: list[int], vec_of: list[int], start: int) -> bool:
    """Breadth-first search for an augmenting path from the free vector ``start``.

    Rows are scanned in ascending index. On success the path is flipped in
    place. One call probes each (vector, row) pair at most once.
    """
    m = L.m
    mask, vals = L.mask, L.vals
    parent_vec = {}  # row -> vector it was reached from
    seen_vec = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for i in range(m):
            if i in parent_vec or (v ^ vals[i]) & mask[i]:
                continue
            parent_vec[i] = v
            w = vec_of[i]
            if w < 0:
                # flip along the alternating path back to start
                while True:
                    pv = parent_vec[i]
                    prev_row = row_of[pv]
                    row_of[pv] = i
                    vec_of[i] = pv
                    if pv == start:
                        return True
                    i = prev_row
            if w not in seen_vec:
                seen_vec.add(w)
                queue.append(w)
    return False


def is_unblocked(L: PartialMatrix) -> Optional[MatchingState]:
    """A saturating matching for ``L`` (a useful-subset witness), or None if blocked.

    The state keeps its own copy of ``L``.
    """
    _check_cap(L)
    m, n = L.m, L.n
    size = 1 << n
    if m < size:
        return None
    L = L.copy()
    row_of = [-1] * size
    vec_of = [-1] * m
    # vector k starts on row k when compatible; this is the whole matching for an all-unknown L
    for v in range(size):
        if L.row_compatible(v, v):
            row_of[v] = v
            vec_of[v] = v
    for v in range(size):
        if row_of[v] < 0 and not _augment(L, row_of, vec_of, v):
            return None
    return MatchingState(L, row_of, vec_of)


def try_set_and_repair(S: MatchingState, q: Query, b: int) -> Optional[MatchingState]:
    """Answer ``q`` with ``b`` and repair the matching with one augmenting search.

    Returns a new state, or None when the answer blocks the matrix. ``S`` is
    left untouched either way.
    """
    L = S.L.copy()
    L.set_cell(q, b)
    row_of = list(S.row_of)
    vec_of = list(S.vec_of)
    v = vec_of[q.row]
    if v >= 0 and bit_of(v, q.col, L.n) != b:
        # the answer cut the matched edge; everything else is still compatible
        vec_of[q.row] = -1
        row_of[v] = -1
        if not _augment(L, row_of, vec_of, v):
            return None
    return MatchingState(L, row_of, vec_of)


def initial_state(L: PartialMatrix) -> MatchingState:
    """Matching for the all-unknown matrix: vector k on row k."""
    state = is_unblocked(L)
    if state is None:
        raise InvalidParams("matrix is blocked")
    return state
