import json

import pytest
from hypothesis import given, settings

from setpath.graph import (
    Digraph,
    GraphParseError,
    GraphPopulation,
    complete_digraph,
    emit_edge_list,
    emit_json_graph,
    enumerate_digraphs,
    parse_edge_list,
    parse_graph,
    parse_json_graph,
    random_digraph,
)

from conftest import digraphs


def test_edge_list_triangle():
    g = parse_edge_list("3 3\n1 2\n2 3\n3 1")
    assert g.adjacency == ((0, 1, 0), (0, 0, 1), (1, 0, 0))


def test_edge_list_self_loop():
    g = parse_edge_list("1 1\n1 1")
    assert g.adjacency == ((1,),) and g.has_loop(0)


def test_edge_list_parallel_arcs():
    assert parse_edge_list("2 2\n1 2\n1 2").adjacency[0][1] == 2


def test_edge_list_skips_blank_and_comment_lines():
    g = parse_edge_list("# tiny\n2 1\n\n1 2\n")
    assert g.arcs == [(0, 1)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 1\n1 4", 2),
        ("3 1\n1", 2),
        ("3 1\n1 x", 2),
        ("-1 0", 1),
        ("3 -2", 1),
        ("3 2\n1 2", 2),
        ("3 1\n1 2\n2 3", 3),
        ("3", 1),
    ],
)
def test_edge_list_errors_name_the_line(text, line):
    with pytest.raises(GraphParseError) as exc:
        parse_edge_list(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_empty_edge_list():
    with pytest.raises(GraphParseError):
        parse_edge_list("\n\n")


def test_json_arcs():
    g = parse_json_graph('{"n":2,"arcs":[[1,2]]}')
    assert g.adjacency == ((0, 1), (0, 0))


def test_json_adjacency_parallel():
    g = parse_json_graph('{"n":2,"adjacency":[[0,3],[0,0]]}')
    assert g.adjacency[0][1] == 3


def test_json_canonical_roundtrip():
    text = '{"n":2,"arcs":[[1,2],[1,2],[2,2]]}'
    canon = emit_json_graph(parse_json_graph(text))
    assert json.loads(canon) == {"n": 2, "adjacency": [[0, 2], [0, 1]]}
    assert emit_json_graph(parse_json_graph(canon)) == canon


@pytest.mark.parametrize(
    "text",
    [
        '{"n":2}',
        '{"n":2,"arcs":[],"adjacency":[[0,0],[0,0]]}',
        '{"n":2,"adjacency":[[0,0]]}',
        '{"n":2,"adjacency":[[0,-1],[0,0]]}',
        '{"n":2,"arcs":[[1,3]]}',
        '{"n":0,"arcs":[]}',
        '[1,2]',
        '{"n":2,',
    ],
)
def test_json_errors(text):
    with pytest.raises(GraphParseError):
        parse_json_graph(text)


@settings(max_examples=100)
@given(digraphs(max_n=6, multi=True))
def test_roundtrips(g):
    assert parse_json_graph(emit_json_graph(g)) == g
    assert parse_edge_list(emit_edge_list(g)) == g
    assert parse_graph(emit_json_graph(g)) == g
    assert parse_graph(emit_edge_list(g)) == g


def test_named_graph_roundtrip():
    g = complete_digraph(3)
    assert parse_json_graph(emit_json_graph(g)).name == "K3"


def test_digraph_validation():
    with pytest.raises(ValueError):
        Digraph(2, ((0, 1),))
    with pytest.raises(ValueError):
        Digraph(1, ((-1,),))


@pytest.mark.parametrize(
    "n, loops, count",
    [(1, True, 2), (1, False, 1), (2, False, 4), (2, True, 16), (3, True, 512), (3, False, 64), (4, False, 4096)],
)
def test_enumeration_counts(n, loops, count):
    graphs = list(enumerate_digraphs(n, loops))
    assert len(graphs) == count == len(GraphPopulation.exhaustive(n, loops))
    assert len({g.adjacency for g in graphs}) == count


def test_enumeration_count_n4_with_loops():
    assert sum(1 for _ in enumerate_digraphs(4)) == 65536


def test_enumeration_order_is_lexicographic():
    for loops in (True, False):
        codes = [g.code() for g in enumerate_digraphs(3, loops)]
        assert codes == sorted(codes)
    assert [g.adjacency for g in enumerate_digraphs(1)] == [((0,),), ((1,),)]


def test_enumeration_range_guard():
    with pytest.raises(ValueError):
        next(enumerate_digraphs(6))
    with pytest.raises(ValueError):
        GraphPopulation.exhaustive(0)


def test_random_extremes():
    assert random_digraph(5, 0.0, 1).arcs == []
    assert random_digraph(5, 1.0, 1) == Digraph(5, complete_digraph(5).adjacency)


def test_random_is_reproducible():
    assert random_digraph(7, 0.4, 123) == random_digraph(7, 0.4, 123)
    assert any(random_digraph(7, 0.4, 123) != random_digraph(7, 0.4, s) for s in range(124, 130))


def test_random_loops_policy():
    assert not any(random_digraph(6, 0.9, s).has_loop(i) for s in range(20) for i in range(6))
    assert any(random_digraph(6, 0.9, s, loops=True).has_loop(i) for s in range(20) for i in range(6))


def test_random_bad_probability():
    with pytest.raises(ValueError):
        random_digraph(3, 1.5, 0)
    with pytest.raises(ValueError):
        GraphPopulation.random(3, -0.1, 0, 10)


def test_random_population_seeds():
    pop = GraphPopulation.random(5, 0.5, seed=10, count=3)
    assert list(pop) == [random_digraph(5, 0.5, s) for s in (10, 11, 12)]
    assert pop.describe()["graphs"] == 3
