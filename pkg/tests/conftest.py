import itertools
import sys

import pytest

from fockcanon.combinatorics import Symbol


def sym(v, rows):
    return Symbol.from_rows(tuple(v), rows)


def multicharges(level, top=3):
    """Weakly decreasing charges ending in 0 with entries at most ``top``."""
    for head in itertools.combinations_with_replacement(range(top, -1, -1), level - 1):
        yield tuple(head) + (0,)


@pytest.fixture
def lm_symbol():
    return sym((1, 0), [[0, 1, 3, 5], [0, 2, 7]])


@pytest.fixture
def ordered_symbol():
    return sym((2, 2, 1), [[0, 1, 3, 5], [0, 2, 3, 5], [1, 3, 4]])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
