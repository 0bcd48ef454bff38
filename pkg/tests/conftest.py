import pytest

from cycrak.graph import Graph


def graph_from(edges, labels=None):
    """Graph over string labels; ids follow first appearance."""
    index = {}
    for u, v in edges:
        for x in (u, v):
            index.setdefault(x, len(index))
    if labels:
        for x in labels:
            index.setdefault(x, len(index))
    return Graph(len(index), [(index[u], index[v]) for u, v in edges], list(index))


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def two_cliques_bridged(size=5):
    edges = [(i, j) for i in range(size) for j in range(i + 1, size)]
    edges += [(i + size, j + size) for i in range(size) for j in range(i + 1, size)]
    edges.append((size - 1, size))
    return Graph(2 * size, edges)


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def p4():
    return path(4)


@pytest.fixture
def triangle():
    return complete(3)


@pytest.fixture
def c4():
    return cycle(4)


@pytest.fixture
def s4():
    return star(4)


# one (criterion, status, detail) entry per acceptance check, echoed after the run
ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, status, detail in sorted(ACCEPTANCE, key=lambda r: (int(r[0][1:].rstrip("ab")), r[0])):
        terminalreporter.write_line(f"{cid:4s} {status:4s}  {detail}")
