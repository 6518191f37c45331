import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings

from setpath.detector import (
    build_R,
    build_S1,
    build_T,
    detect_cycles,
    detect_paths,
    hamiltonian_cycle,
    hamiltonian_cycle_cell,
    hamiltonian_path,
    iter_cycle_reports,
    iter_path_reports,
    language,
)
from setpath.graph import Digraph, complete_digraph, enumerate_digraphs, parse_edge_list
from setpath.oracle import k_path_exists, oracle_k_cycles

from conftest import digraphs


def rendered(m):
    return [[str(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]


def test_build_T_triangle(triangle):
    assert rendered(build_T(triangle)) == [["V", "{2}", "V"], ["V", "V", "{3}"], ["{1}", "V", "V"]]


def test_build_R_triangle(triangle):
    assert rendered(build_R(triangle)) == [["V", "{1}", "V"], ["V", "V", "{2}"], ["{3}", "V", "V"]]


def test_build_R_single_arc():
    g = parse_edge_list("3 1\n1 2")
    assert rendered(build_R(g)) == [["V", "{1}", "V"], ["V"] * 3, ["V"] * 3]


def test_arcless_and_loop_only_graphs_give_all_V():
    empty = Digraph(3, ((0,) * 3,) * 3)
    loops = Digraph(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    for g in (empty, loops):
        assert build_T(g).is_all_V()
        assert build_R(g).is_all_V()
    assert build_S1(empty).is_all_V()


def test_build_S1():
    g = Digraph(3, ((1, 1, 0), (0, 0, 0), (0, 0, 0)))
    s = build_S1(g)
    assert [str(s[i, i]) for i in range(3)] == ["{Loop}", "V", "V"]
    looped = Digraph(2, ((1, 0), (0, 2)))
    assert [str(build_S1(looped)[i, i]) for i in range(2)] == ["{Loop}", "{Loop}"]


def test_parallel_arcs_collapse():
    assert build_T(Digraph(2, ((0, 5), (0, 0)))) == build_T(Digraph(2, ((0, 1), (0, 0))))


def test_detect_paths_triangle(triangle):
    rep = detect_paths(triangle, 2)
    assert rep.rows() == ["001", "100", "010"]
    assert rep.witness_matrix is None
    assert detect_paths(triangle, 2, keep_witness=True).witness_matrix is not None


def test_detect_paths_chain(chain):
    assert detect_paths(chain, 2).rows() == ["001", "000", "000"]


def test_detect_paths_rejects_bad_k(triangle):
    for k in (0, -3):
        with pytest.raises(ValueError):
            detect_paths(triangle, k)
        with pytest.raises(ValueError):
            detect_cycles(triangle, k)


def test_detect_cycles_triangle(triangle):
    rep = detect_cycles(triangle, 3)
    assert rep.vector() == "111"
    assert str(rep.cells[0]) == "{2,3}"
    assert detect_cycles(triangle, 2).vector() == "000"


def test_detect_cycles_self_loop():
    g = parse_edge_list("3 2\n1 1\n1 2")
    assert detect_cycles(g, 1).vector() == "100"


def test_hamiltonian_path_examples(k3, chain):
    assert hamiltonian_path(k3).rows() == ["011", "101", "110"]
    assert not hamiltonian_path(Digraph(3, ((0,) * 3,) * 3)).pairs.any()
    assert hamiltonian_path(chain).rows() == ["001", "000", "000"]


def test_hamiltonian_cycle_examples(triangle, chain, k4):
    assert hamiltonian_cycle(triangle)
    assert not hamiltonian_cycle(chain)
    assert hamiltonian_cycle(k4)


def test_hamiltonian_needs_two_vertices():
    g = Digraph(1, ((1,),))
    with pytest.raises(ValueError):
        hamiltonian_path(g)
    with pytest.raises(ValueError):
        hamiltonian_cycle(g)


def test_k_beyond_n_is_allowed(triangle):
    assert not detect_paths(triangle, 7).pairs.any()
    assert detect_cycles(triangle, 6).vector() == "000"


def test_k_equal_n_reports_walks_not_paths(revisit_graph, k3):
    # 1 -> 2 -> 3 -> 2 has three arcs but revisits 2; the detector still reports (1,2)
    rep = detect_paths(revisit_graph, 3)
    assert rep.rows() == ["010", "000", "000"]
    assert not k_path_exists(revisit_graph, 0, 1, 3)
    assert detect_paths(k3, 3).pairs.any()


def test_cycles_beyond_n_reported_on_revisiting_walks():
    # 1 -> 2 -> 3 -> 2 -> 1 is a closed 4-walk on 3 vertices
    g = parse_edge_list("3 4\n1 2\n2 1\n2 3\n3 2")
    assert detect_cycles(g, 4).vertices[0]
    assert not oracle_k_cycles(g, 0, 4).exists


def test_report_json_schema(triangle):
    assert detect_paths(triangle, 2).to_json() == {"k": 2, "kind": "path", "matrix": ["001", "100", "010"]}
    assert detect_cycles(triangle, 3).to_json() == {"k": 3, "kind": "cycle", "vector": "111"}
    json.dumps(language(triangle).to_json())


def test_language_shapes(triangle):
    lang = language(triangle)
    assert [p.k for p in lang.paths] == [1, 2]
    assert [c.k for c in lang.cycles] == [1, 2, 3]
    assert language(Digraph(1, ((0,),))).to_json() == {
        "n": 1,
        "paths": [],
        "cycles": [{"k": 1, "kind": "cycle", "vector": "0"}],
    }
    assert language(Digraph(1, ((1,),))).cycles[0].vector() == "1"


@settings(max_examples=60, deadline=None)
@given(digraphs(max_n=5))
def test_language_matches_individual_detection(g):
    lang = language(g)
    for rep in lang.paths:
        assert np.array_equal(rep.pairs, detect_paths(g, rep.k).pairs)
    for rep in lang.cycles:
        assert np.array_equal(rep.vertices, detect_cycles(g, rep.k).vertices)


@settings(max_examples=150, deadline=None)
@given(digraphs(max_n=5, multi=True))
def test_soundness(g):
    for rep in iter_path_reports(g, g.n):
        for i, j in itertools.permutations(range(g.n), 2):
            if k_path_exists(g, i, j, rep.k):
                assert rep.pairs[i, j]
    for rep in iter_cycle_reports(g, g.n):
        for i in range(g.n):
            if oracle_k_cycles(g, i, rep.k).exists:
                assert rep.vertices[i]


@settings(max_examples=100, deadline=None)
@given(digraphs(max_n=5))
def test_diagonal_never_reported(g):
    for rep in iter_path_reports(g, g.n + 1):
        assert not rep.pairs.diagonal().any()


def test_paths_exact_on_acyclic_graphs():
    # without directed cycles every walk is a path, so detection is exact
    for g in enumerate_digraphs(4, loops=False):
        if any(g.has_arc(i, j) for i in range(4) for j in range(i + 1)):
            continue
        for rep in iter_path_reports(g, 4):
            for i, j in itertools.permutations(range(4), 2):
                assert rep.pairs[i, j] == k_path_exists(g, i, j, rep.k)


@settings(max_examples=100, deadline=None)
@given(digraphs(min_n=2, max_n=6))
def test_one_row_hamiltonian_matches_full_cycle_matrix(g):
    full = detect_cycles(g, g.n)
    assert hamiltonian_cycle(g) == bool(full.vertices[0])
    assert hamiltonian_cycle_cell(g) == full.cells[0]


def test_multiword_universe_long_chain():
    n = 70
    g = Digraph.from_arcs(n, [(v, v + 1) for v in range(n - 1)])
    rep = detect_paths(g, n - 1, keep_witness=True)
    assert rep.pairs.sum() == 1 and rep.pairs[0, n - 1]
    assert rep.witness_matrix[0, n - 1].vertex_tokens() == list(range(1, n))
    assert not hamiltonian_cycle(g)
    ring = Digraph.from_arcs(n, [(v, (v + 1) % n) for v in range(n)])
    assert hamiltonian_cycle(ring)
    assert detect_cycles(ring, n).vector() == "1" * n
