import numpy as np
import pytest
from hypothesis import strategies as st

from cuntzsections.symbolic import Element, MultiIndex, Word


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def multi_indices(N, max_len=3):
    return st.lists(st.integers(0, N - 1), max_size=max_len).map(lambda d: MultiIndex(N, tuple(d)))


def words(N, max_len=3):
    return st.builds(Word, multi_indices(N, max_len), multi_indices(N, max_len))


def coefficients():
    part = st.integers(-4, 4).map(lambda x: x / 2)
    return st.builds(complex, part, part).filter(lambda c: c != 0)


def elements(N, max_len=3, max_terms=4):
    pairs = st.lists(st.tuples(words(N, max_len), coefficients()), min_size=1, max_size=max_terms)
    return pairs.map(lambda p: Element.from_terms(N, p))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
