import warnings

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_upto, labeled_corpus
from oracles import brute_force_walks, brute_force_walks_python, labeled_edge_sets
from walkcert.graph import (
    CorpusLimitError,
    Graph,
    GraphFormatError,
    decode_graph6,
    disjoint_union,
    emit_edge_list,
    encode_graph6,
    generate_labeled_graphs,
    load_graph,
    make_named_graph,
    walk_counts,
)


def test_graph6_two_node_edgeless():
    g = load_graph("A?", "graph6")
    assert g.n == 2 and g.m == 0


def test_graph6_B_underscore_is_three_nodes_one_edge():
    g = load_graph("B_", "graph6")
    assert g.n == 3 and g.edges == {(0, 1)}


def test_graph6_Bw_is_triangle():
    g = load_graph("Bw", "graph6")
    assert g.n == 3 and g.edges == {(0, 1), (0, 2), (1, 2)}


def test_graph6_matches_networkx_on_n5_corpus():
    for g in corpus_upto(5):
        s = encode_graph6(g)
        h = nx.from_graph6_bytes(s.encode())
        assert h.number_of_nodes() == g.n
        assert {tuple(sorted(e)) for e in h.edges()} == set(g.edges)
        assert nx.to_graph6_bytes(h, header=False).strip().decode() == s


def test_graph6_round_trip_n5():
    for g in corpus_upto(5):
        assert load_graph(encode_graph6(g), "graph6") == g


@pytest.mark.parametrize("bad", ["", "B", "Bww", "~???", "B\x7f"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphFormatError):
        decode_graph6(bad)


def test_graph6_rejects_large_n():
    with pytest.raises(GraphFormatError):
        encode_graph6(make_named_graph("edgeless", 63))


def test_edge_list_path():
    g = load_graph("n 3\n0 1\n1 2", "edge-list")
    assert g == make_named_graph("path", 3)


def test_edge_list_isolated_vertices_round_trip():
    g = Graph.from_edges(5, [(0, 1)])
    assert load_graph(emit_edge_list(g), "edge-list") == g


@pytest.mark.parametrize("text", [
    "0 1\n1 2",          # missing header
    "n x\n0 1",          # malformed count
    "n 3\n0 3",          # out of range
    "n 3\n1 1",          # self-loop
    "n 3\n0 1 2",        # three fields
])
def test_edge_list_errors(text):
    with pytest.raises(GraphFormatError):
        load_graph(text, "edge-list")


def test_edge_list_duplicate_warns_and_dedups():
    with pytest.warns(UserWarning, match="duplicate"):
        g = load_graph("n 3\n0 1\n1 0\n1 2", "edge-list")
    assert g.m == 2


def test_graph_rejects_self_loop():
    with pytest.raises(GraphFormatError):
        Graph.from_edges(2, [(1, 1)])


def test_named_graphs():
    k3 = make_named_graph("complete", 3)
    assert k3.m == 3
    star = make_named_graph("star", 5)
    assert sorted(star.degrees()) == [1, 1, 1, 1, 1, 5]
    u = disjoint_union(k3, star)
    assert (u.n, u.m) == (9, 8)
    assert make_named_graph("cycle", 4).is_regular()
    with pytest.raises(ValueError):
        make_named_graph("cycle", 2)
    with pytest.raises(ValueError):
        make_named_graph("path", 0)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 8), (4, 64), (6, 32768)])
def test_labeled_counts(n, count):
    assert sum(1 for _ in generate_labeled_graphs(n)) == count


def test_labeled_graphs_distinct_and_complete():
    got = {frozenset(g.edges) for g in labeled_corpus(4)}
    want = {frozenset(e) for e in labeled_edge_sets(4)}
    assert got == want


def test_partitions_cover_corpus():
    parts = [list(generate_labeled_graphs(5, start=lo, stop=hi)) for lo, hi in [(0, 100), (100, 777), (777, 1024)]]
    assert [g for p in parts for g in p] == list(generate_labeled_graphs(5))


def test_corpus_limit():
    with pytest.raises(CorpusLimitError):
        next(generate_labeled_graphs(8))
    with pytest.raises(CorpusLimitError):
        next(generate_labeled_graphs(5, limit=4))


def test_dedup_is_subset():
    full = labeled_corpus(4)
    dd = list(generate_labeled_graphs(4, dedup=True))
    assert 0 < len(dd) < len(full)


def test_walks_path3():
    assert walk_counts(make_named_graph("path", 3), 4).counts == (3, 4, 6, 8, 12)


def test_walks_triangle():
    assert walk_counts(make_named_graph("complete", 3), 3).counts == (3, 6, 12, 24)


def test_walks_triangle_plus_star():
    g = disjoint_union(make_named_graph("complete", 3), make_named_graph("star", 5))
    expected = brute_force_walks_python(g.n, g.edges, 3)
    assert expected == [9, 16, 42, 74]
    assert walk_counts(g, 3).counts == tuple(expected)


def test_walks_negative_K():
    with pytest.raises(ValueError):
        walk_counts(make_named_graph("path", 2), -1)


def test_walks_large_K_is_exact():
    wt = walk_counts(make_named_graph("complete", 10), 64)
    assert wt[64] == 10 * 9 ** 64


def test_walks_match_brute_force_n4():
    for g in corpus_upto(4):
        assert list(walk_counts(g, 5).counts) == brute_force_walks(g.n, g.edges, 5)


def test_walk_table_invariants():
    for g in corpus_upto(5):
        wt = walk_counts(g, 8)
        assert wt[0] == g.n and wt[1] == 2 * g.m
        assert wt[2] == sum(d * d for d in g.degrees())
        for a in range(5):
            for b in range(5):
                assert wt[a + b] ** 2 <= wt[2 * a] * wt[2 * b]


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10))
def test_regular_walks(n, K):
    for g in (make_named_graph("cycle", n), make_named_graph("complete", n)):
        d = g.degrees()[0]
        wt = walk_counts(g, K)
        assert wt.counts == tuple(n * d ** k for k in range(K + 1))
        for a in range(K + 1):
            for b in range(K + 1 - a):
                assert wt[a] * wt[b] == wt[0] * wt[a + b]


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(corpus_upto(4)), st.sampled_from(corpus_upto(4)))
def test_disjoint_union_additivity(g1, g2):
    K = 7
    w = walk_counts(disjoint_union(g1, g2), K).counts
    assert w == tuple(a + b for a, b in zip(walk_counts(g1, K).counts, walk_counts(g2, K).counts))


def test_graph_is_immutable_and_hashable():
    g = make_named_graph("path", 4)
    with pytest.raises(AttributeError):
        g.n = 5
    assert len({g, make_named_graph("path", 4)}) == 1
