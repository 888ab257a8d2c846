import functools

import pytest

from hexacarpet.graphs import build_geometry_graph, build_word_graph
from hexacarpet.spectral import level_eigenpairs


@functools.lru_cache(maxsize=None)
def word_graph(n):
    return build_word_graph(n)


@functools.lru_cache(maxsize=None)
def geometry_graph(n):
    return build_geometry_graph(n)


@functools.lru_cache(maxsize=None)
def eigenpairs(n, k=20):
    return level_eigenpairs(n, k)


@pytest.fixture(scope="session")
def wg():
    return word_graph


@pytest.fixture(scope="session")
def gg():
    return geometry_graph


@pytest.fixture(scope="session")
def eig():
    return eigenpairs


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
