import random
from itertools import combinations, product

import pytest

from antiramsey.graph import SimpleGraph


def brute_chromatic(g: SimpleGraph) -> int:
    """Smallest k admitting a proper coloring, by trying every assignment."""
    if g.n == 0:
        return 0
    edges = g.edges()
    for k in range(1, g.n + 1):
        for col in product(range(k), repeat=g.n):
            if all(col[u] != col[v] for u, v in edges):
                return k
    raise AssertionError


def random_graph(n: int, p: float, rng: random.Random) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20240611)


# --- acceptance report ----------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title = mark.args
    _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", title, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, secs = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}  ({secs:.1f}s)")
