import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapsum import graph as G
from lapsum.graph import Graph, Graph6Error, GraphError, parse_graph6, write_graph6
from lapsum.rng import SplitMix64

from .strategies import graphs


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def nx_graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()


# ---------------------------------------------------------------- rng


def test_splitmix_reference_vector():
    r = SplitMix64(1234567)
    assert [r.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_splitmix_seed_zero():
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF


@given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
def test_randbelow_in_range(seed, k):
    r = SplitMix64(seed)
    assert all(0 <= r.randbelow(k) < k for _ in range(20))


def test_sample_distinct():
    s = SplitMix64(9).sample(30, 10)
    assert len(set(s)) == 10 and all(0 <= x < 30 for x in s)


# ---------------------------------------------------------------- graph6


def test_graph6_k1():
    g = parse_graph6("@")
    assert (g.n, g.e) == (1, 0)
    assert write_graph6(G.complete(1)) == "@"


def test_graph6_reference_decoder():
    g = parse_graph6("D?{")
    ref = nx.from_graph6_bytes(b"D?{")
    assert g.n == 5
    assert sorted(g.edges()) == sorted(tuple(sorted(e)) for e in ref.edges())
    assert g.edges() == [(0, 4), (1, 4), (2, 4), (3, 4)]


@given(graphs(1, 10))
def test_graph6_matches_networkx(g):
    s = write_graph6(g)
    assert s == nx_graph6(g)
    assert parse_graph6(s) == g


def test_graph6_roundtrip_thousand_random():
    rng = SplitMix64(2024)
    for _ in range(1000):
        n = 1 + rng.randbelow(10)
        g = G.gnp(n, rng.random(), rng.next_u64())
        assert parse_graph6(write_graph6(g)) == g


def test_graph6_roundtrip_corpus_strings():
    for n in range(1, 6):
        for g in G.labeled_graphs(n, connected_only=False):
            s = nx_graph6(g)
            assert write_graph6(parse_graph6(s)) == s


def test_graph6_header_accepted():
    assert parse_graph6(">>graph6<<Bw\n") == G.complete(3)


@pytest.mark.parametrize(
    "text, offset",
    [
        ("D?{!", 3),  # out-of-range character
        ("D?{?", 3),  # one byte too many
        ("D?", 2),  # too short
        ("B@", 1),  # n=3 uses 3 of 6 bits; low padding bit set
        ("?", 0),  # n=0
        ("~?", 0),  # multi-byte header
    ],
)
def test_graph6_errors_name_offset(text, offset):
    with pytest.raises(Graph6Error) as exc:
        parse_graph6(text)
    assert exc.value.offset == offset
    assert f"byte offset {offset}" in str(exc.value)


def test_graph6_write_too_large():
    with pytest.raises(Graph6Error):
        write_graph6(G.empty(63))


# ---------------------------------------------------------------- structure


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))  # asymmetric


@given(graphs(1, 9))
def test_degree_invariants(g):
    assert sum(g.degrees) == 2 * g.e
    h = to_nx(g)
    assert list(g.degrees) == [h.degree(v) for v in range(g.n)]
    assert g.is_connected() == nx.is_connected(h)


@given(graphs(2, 9), st.data())
def test_boundaries_against_networkx(g, data):
    u = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    h = to_nx(g)
    assert set(G.vertex_boundary(g, u)) == set(nx.node_boundary(h, u))
    assert {frozenset(e) for e in G.edge_boundary(g, u)} == {frozenset(e) for e in nx.edge_boundary(h, u)}
    assert len(G.edge_boundary(g, u)) >= len(G.vertex_boundary(g, u))
    assert G.cut_size(g, G.mask_of(u)) == nx.cut_size(h, u)
    assert G.inner_edge_count(g, G.mask_of(u)) == h.subgraph(u).number_of_edges()


@given(graphs(1, 9))
def test_components_against_networkx(g):
    ours = G.components(g)
    ref = sorted(tuple(sorted(c)) for c in nx.connected_components(to_nx(g)))
    assert ours == ref
    assert [c[0] for c in ours] == sorted(c[0] for c in ours)


def test_vertex_boundary_examples(join34):
    assert G.vertex_boundary(G.complete(5), [0, 1]) == (2, 3, 4)
    assert G.vertex_boundary(G.path(4), [0]) == (1,)
    assert G.vertex_boundary(join34, [3, 4, 5, 6]) == (0, 1, 2)


def test_edge_boundary_examples(join34):
    for n in range(2, 7):
        for m in range(1, n):
            assert len(G.edge_boundary(G.complete(n), range(m))) == m * (n - m)
    assert len(G.edge_boundary(G.cycle(4), [0, 1])) == 2
    assert len(G.edge_boundary(join34, [0, 1, 2])) == 12


def test_induced_subgraph_examples(join34):
    h, idx = G.induced_subgraph(G.complete(5), [1, 3, 4])
    assert h == G.complete(3) and idx == (1, 3, 4)
    h, _ = G.induced_subgraph(join34, [3, 4, 5, 6])
    assert h == G.empty(4)
    g = G.cycle(5)
    assert G.induced_subgraph(g, range(5))[0] == g
    with pytest.raises(GraphError):
        G.induced_subgraph(g, [])


def test_components_examples():
    assert len(G.components(G.complete(5))) == 1
    two_edges = G.disjoint_union(G.complete(2), G.complete(2))
    assert G.components(two_edges) == [(0, 1), (2, 3)]
    assert len(G.components(G.empty(4))) == 4


# ---------------------------------------------------------------- generators


def test_join_degrees(join34):
    assert sorted(join34.degrees, reverse=True) == [6, 6, 6, 3, 3, 3, 3]
    for p in range(1, 5):
        for q in range(1, 5):
            g = G.join(G.complete(p), G.empty(q))
            n = p + q
            assert sorted(g.degrees) == sorted([n - 1] * p + [p] * q)


def test_multipartite():
    g = G.complete_multipartite([2, 2, 2])
    assert g.n == 6 and set(g.degrees) == {4}
    assert nx.is_isomorphic(to_nx(G.complete_multipartite([1, 2, 3])), nx.complete_multipartite_graph(1, 2, 3))


def test_small_families():
    assert G.cycle(3) == G.complete(3)
    assert nx.is_isomorphic(to_nx(G.path(6)), nx.path_graph(6))
    assert nx.is_isomorphic(to_nx(G.cycle(7)), nx.cycle_graph(7))
    assert G.star(3).degrees == (3, 1, 1, 1)
    with pytest.raises(GraphError):
        G.complete_multipartite([])
    with pytest.raises(GraphError):
        G.gnp(5, 1.5, 0)


def test_gnp_deterministic():
    a = G.gnp(10, 0.5, 42)
    assert a == G.gnp(10, 0.5, 42)
    assert write_graph6(a) == "IV}OLLDo_"
    assert G.gnp(8, 0.0, 1).e == 0 and G.gnp(8, 1.0, 1) == G.complete(8)


def test_labeled_counts():
    # connected labelled graphs on n vertices (OEIS A001187)
    assert [sum(1 for _ in G.labeled_graphs(n)) for n in range(1, 6)] == [1, 1, 4, 38, 728]
    assert sum(1 for _ in G.labeled_graphs(4, connected_only=False)) == 64
