import itertools

import pytest

from diag_games.core import PartialMatrix, Query
from diag_games.kronecker import Adversary

# criterion number -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE_RESULTS = {}


class MatrixAdversary(Adversary):
    """Answers from a fixed, fully known matrix (rows given as bit strings)."""

    def __init__(self, rows):
        self.rows = rows

    def answer(self, q: Query) -> int:
        return int(self.rows[q.row][q.col])


class ScriptedAdversary(Adversary):
    def __init__(self, bits):
        self.bits = list(bits)
        self.asked = []

    def answer(self, q: Query) -> int:
        self.asked.append(q)
        return self.bits.pop(0)


def all_completions(L: PartialMatrix):
    """Every full matrix consistent with L, as a tuple of row vectors. Tiny L only."""
    n = L.n
    choices = [[v for v in range(1 << n) if L.row_compatible(i, v)] for i in range(L.m)]
    return itertools.product(*choices)


@pytest.fixture
def matrix_adversary():
    return MatrixAdversary


@pytest.fixture
def scripted_adversary():
    return ScriptedAdversary


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
