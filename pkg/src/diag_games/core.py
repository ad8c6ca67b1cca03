"""Shared domain types: game parameters, queries, the partial matrix, transcripts.

Binary vectors of length ``n`` are plain ints in ``[0, 2**n)``. Column 0 is the
most significant bit, so integer order is lexicographic order on bit strings.
Row and column indices are 0-based in memory and 1-based when serialized.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

MAX_N = 30
ENUM_MAX_N = 20


class GameError(Exception):
    """Base class for rule violations detected by the library."""


class InvalidParams(GameError, ValueError):
    pass


class CellOverwrite(GameError):
    pass


class DuplicateQuery(GameError):
    pass


class BudgetExceeded(GameError):
    """An exhaustive search would exceed its hard enumeration cap."""


class Regime(str, enum.Enum):
    SMALL = "small"  # m <= n
    MID = "mid"  # n < m < 2^n
    LARGE = "large"  # m >= 2^n


@dataclass(frozen=True)
class GameParams:
    m: int
    n: int

    def __post_init__(self):
        if not isinstance(self.m, int) or not isinstance(self.n, int):
            raise InvalidParams(f"m and n must be integers, got {self.m!r}, {self.n!r}")
        if self.m < 1 or self.n < 1:
            raise InvalidParams(f"m and n must be positive, got m={self.m}, n={self.n}")
        if self.n > MAX_N:
            raise InvalidParams(f"n={self.n} exceeds the cap of {MAX_N}")

    @property
    def regime(self) -> Regime:
        if self.m <= self.n:
            return Regime.SMALL
        if self.m < (1 << self.n):
            return Regime.MID
        return Regime.LARGE

    @property
    def cells(self) -> int:
        return self.m * self.n


@dataclass(frozen=True, order=True)
class Query:
    row: int
    col: int

    def check(self, params: GameParams) -> None:
        if not (0 <= self.row < params.m and 0 <= self.col < params.n):
            raise InvalidParams(
                f"query ({self.row + 1},{self.col + 1}) outside a {params.m}x{params.n} matrix"
            )


class CellState(enum.Enum):
    ZERO = 0
    ONE = 1
    UNKNOWN = None

    def __str__(self) -> str:
        return {CellState.ZERO: "0", CellState.ONE: "1", CellState.UNKNOWN: "*"}[self]


# ---------- binary vectors ----------

def bit_of(v: int, j: int, n: int) -> int:
    return (v >> (n - 1 - j)) & 1


def col_mask(j: int, n: int) -> int:
    return 1 << (n - 1 - j)


def cols_mask(cols: Iterable[int], n: int) -> int:
    mask = 0
    for j in cols:
        mask |= 1 << (n - 1 - j)
    return mask


def from_bits(bits: Iterable[int]) -> int:
    v = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        v = (v << 1) | b
    return v


def to_bits(v: int, n: int) -> list[int]:
    return [(v >> (n - 1 - j)) & 1 for j in range(n)]


def to_str(v: int, n: int) -> str:
    return format(v, f"0{n}b") if n else ""


def parse_vector(s: str, n: Optional[int] = None) -> int:
    s = s.strip()
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"not a binary string: {s!r}")
    if n is not None and len(s) != n:
        raise ValueError(f"expected {n} bits, got {len(s)}")
    return int(s, 2)


# ---------- partial matrix ----------

class PartialMatrix:
    """Kronecker's matrix as far as Cantor knows it.

    Each row is stored as a pair of ints: ``mask`` marks the queried columns and
    ``vals`` holds the answered bits (zero outside ``mask``).
    """

    __slots__ = ("params", "mask", "vals")

    def __init__(self, params: GameParams):
        self.params = params
        self.mask = [0] * params.m
        self.vals = [0] * params.m

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def full(self) -> int:
        return (1 << self.params.n) - 1

    def copy(self) -> "PartialMatrix":
        other = PartialMatrix.__new__(PartialMatrix)
        other.params = self.params
        other.mask = list(self.mask)
        other.vals = list(self.vals)
        return other

    def cell(self, i: int, j: int) -> CellState:
        Query(i, j).check(self.params)
        bit = col_mask(j, self.n)
        if not self.mask[i] & bit:
            return CellState.UNKNOWN
        return CellState.ONE if self.vals[i] & bit else CellState.ZERO

    def is_known(self, q: Query) -> bool:
        return bool(self.mask[q.row] >> (self.params.n - 1 - q.col) & 1)

    def set_cell(self, q: Query, b: int) -> "PartialMatrix":
        """Record answer ``b`` for ``q`` in place and return self."""
        params = self.params
        i, j = q.row, q.col
        if not (0 <= i < params.m and 0 <= j < params.n):
            q.check(params)
        if b != 0 and b != 1:
            raise ValueError(f"answer must be 0 or 1, got {b!r}")
        bit = 1 << (params.n - 1 - j)
        if self.mask[i] & bit:
            raise CellOverwrite(f"cell ({q.row + 1},{q.col + 1}) is already known")
        self.mask[i] |= bit
        if b:
            self.vals[i] |= bit
        return self

    def queried(self, i: int) -> list[int]:
        mask = self.mask[i]
        return [j for j in range(self.n) if mask & col_mask(j, self.n)]

    def unknown_cells(self) -> Iterator[Query]:
        for i in range(self.m):
            for j in range(self.n):
                if not self.mask[i] & col_mask(j, self.n):
                    yield Query(i, j)

    def num_known(self) -> int:
        return sum(bin(mk).count("1") for mk in self.mask)

    def row_compatible(self, i: int, v: int) -> bool:
        return (v ^ self.vals[i]) & self.mask[i] == 0

    def row_is_fixed(self, i: int) -> bool:
        return self.mask[i] == self.full

    def fixed_rows(self) -> set[int]:
        full = self.full
        return {self.vals[i] for i in range(self.m) if self.mask[i] == full}

    def is_complete(self) -> bool:
        return len(self.fixed_rows()) == 1 << self.n

    def row_key(self, i: int) -> tuple[int, int]:
        return self.mask[i], self.vals[i]

    def row_str(self, i: int) -> str:
        return "".join(str(self.cell(i, j)) for j in range(self.n))

    def __str__(self) -> str:
        return "\n".join(self.row_str(i) for i in range(self.m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialMatrix):
            return NotImplemented
        return self.params == other.params and self.mask == other.mask and self.vals == other.vals

    @classmethod
    def from_rows(cls, rows: Iterable[str]) -> "PartialMatrix":
        """Build from strings over ``0``, ``1`` and ``*``, e.g. ``["0*", "11"]``."""
        rows = list(rows)
        if not rows:
            raise InvalidParams("need at least one row")
        n = len(rows[0])
        L = cls(GameParams(len(rows), n))
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InvalidParams("rows have different lengths")
            for j, ch in enumerate(row):
                if ch in "01":
                    L.set_cell(Query(i, j), int(ch))
                elif ch not in "*?":
                    raise ValueError(f"bad cell character {ch!r}")
        return L


def new_partial_matrix(params: GameParams) -> PartialMatrix:
    return PartialMatrix(params)


def defeats_all_rows(L: PartialMatrix, u: int) -> bool:
    """True iff every row has a known bit that differs from ``u``."""
    return not any(L.row_compatible(i, u) for i in range(L.m))


# ---------- transcripts ----------

@dataclass(frozen=True)
class SearchClaim:
    u: int


@dataclass(frozen=True)
class DecisionClaim:
    complete: bool
    witness: Optional[int] = None


Claim = Union[SearchClaim, DecisionClaim]


@dataclass
class Transcript:
    params: GameParams
    events: list[tuple[Query, int]] = field(default_factory=list)
    claim: Optional[Claim] = None
    meta: dict = field(default_factory=dict)

    @property
    def num_queries(self) -> int:
        return len(self.events)

    def matrix(self) -> PartialMatrix:
        L = PartialMatrix(self.params)
        for q, b in self.events:
            L.set_cell(q, b)
        return L

    def validate(self) -> None:
        if len(self.events) > self.params.cells:
            raise GameError("transcript has more events than cells")
        seen = set()
        for q, _ in self.events:
            if q in seen:
                raise DuplicateQuery(f"query ({q.row + 1},{q.col + 1}) repeated")
            seen.add(q)
        regime = self.params.regime
        if isinstance(self.claim, SearchClaim) and regime is Regime.LARGE:
            raise GameError("search claim in the m >= 2^n regime")
        if isinstance(self.claim, DecisionClaim) and regime is not Regime.LARGE:
            raise GameError("decision claim outside the m >= 2^n regime")

    def to_dict(self) -> dict:
        n = self.params.n
        claim: Optional[dict]
        if isinstance(self.claim, SearchClaim):
            claim = {"type": "search", "u": to_bits(self.claim.u, n)}
        elif isinstance(self.claim, DecisionClaim):
            claim = {
                "type": "decision",
                "complete": self.claim.complete,
                "witness": None if self.claim.witness is None else to_bits(self.claim.witness, n),
            }
        else:
            claim = None
        out = {
            "m": self.params.m,
            "n": n,
            "events": [{"i": q.row + 1, "j": q.col + 1, "b": b} for q, b in self.events],
            "claim": claim,
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        params = GameParams(int(d["m"]), int(d["n"]))
        events = []
        for e in d["events"]:
            q = Query(int(e["i"]) - 1, int(e["j"]) - 1)
            q.check(params)
            b = int(e["b"])
            if b not in (0, 1):
                raise ValueError(f"bad answer bit {b!r}")
            events.append((q, b))
        claim: Optional[Claim] = None
        c = d.get("claim")
        if c is not None:
            if c["type"] == "search":
                claim = SearchClaim(from_bits(c["u"]))
            elif c["type"] == "decision":
                w = c.get("witness")
                claim = DecisionClaim(bool(c["complete"]), None if w is None else from_bits(w))
            else:
                raise ValueError(f"unknown claim type {c['type']!r}")
        t = cls(params, events, claim, dict(d.get("meta", {})))
        t.validate()
        return t

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_dict(json.loads(text))
