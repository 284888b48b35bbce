import pytest
from hypothesis import settings

from lapsum import graph as G

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def small_corpus(n_max: int = 5):
    """All connected labelled graphs with 2 <= n <= n_max."""
    return [g for n in range(2, n_max + 1) for g in G.labeled_graphs(n)]


@pytest.fixture(scope="session")
def corpus5():
    return small_corpus(5)


@pytest.fixture(scope="session")
def join34():
    return G.join(G.complete(3), G.empty(4))


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import RESULTS, summary_lines

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in summary_lines():
        terminalreporter.write_line(line)
