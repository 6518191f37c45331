import pytest
from hypothesis import strategies as st

from setpath.graph import Digraph, complete_digraph, parse_edge_list

# (criterion, verdict, detail) lines collected by test_acceptance.py
ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{verdict}] {name}: {detail}")


@pytest.fixture
def triangle() -> Digraph:
    return parse_edge_list("3 3\n1 2\n2 3\n3 1")


@pytest.fixture
def chain() -> Digraph:
    return parse_edge_list("3 2\n1 2\n2 3")


@pytest.fixture
def k3() -> Digraph:
    return complete_digraph(3)


@pytest.fixture
def k4() -> Digraph:
    return complete_digraph(4)


@pytest.fixture
def revisit_graph() -> Digraph:
    # 1->2, 2<->3: walks from 1 can bounce between 2 and 3 forever
    return parse_edge_list("3 3\n1 2\n2 3\n3 2")


@st.composite
def digraphs(draw, min_n=1, max_n=5, loops=True, multi=False):
    n = draw(st.integers(min_n, max_n))
    top = 3 if multi else 1
    cells = st.integers(0, top)
    adj = [[draw(cells) if (loops or i != j) else 0 for j in range(n)] for i in range(n)]
    return Digraph(n, tuple(map(tuple, adj)))
