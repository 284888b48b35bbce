import math
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapsum import graph as G
from lapsum.applications import (
    EnumerationGuardError,
    NotDominatingError,
    PreconditionError,
    cut_existence,
    edge_connectivity_bound,
    exact_edge_connectivity,
    expected_cut,
    expected_cut_bounds,
    exhaustive_mean_cut,
    greedy_kdom,
    is_k_dominating,
    isoperimetric_exact,
    isoperimetric_number,
    isoperimetric_upper,
    kdom_bound,
    mohar_bounds,
)

from .strategies import connected_graphs
from .test_graph import to_nx


def two_triangles():
    return G.Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


# ---------------------------------------------------------------- edge connectivity


def test_edge_connectivity_examples():
    for n in range(3, 9):
        value, _ = edge_connectivity_bound(G.complete(n))
        assert value == pytest.approx(n - 1)
        assert exact_edge_connectivity(G.complete(n)).value == n - 1
    assert exact_edge_connectivity(G.cycle(6)).value == 2
    assert edge_connectivity_bound(G.cycle(6))[0] >= 2 - 1e-9
    assert exact_edge_connectivity(G.path(4)).value == 1
    assert edge_connectivity_bound(G.path(4))[0] >= 1 - 1e-9
    cut = exact_edge_connectivity(two_triangles())
    assert cut.value == 1 and cut.cut_edges(two_triangles()) == [(2, 3)]


def test_edge_connectivity_disconnected():
    g = G.disjoint_union(G.complete(3), G.complete(2))
    res = exact_edge_connectivity(g)
    assert res.value == 0 and res.cut_edges(g) == []
    with pytest.raises(PreconditionError):
        edge_connectivity_bound(g)


@given(connected_graphs(2, 9))
def test_edge_connectivity_against_networkx(g):
    exact = exact_edge_connectivity(g)
    assert exact.value == nx.edge_connectivity(to_nx(g))
    assert len(exact.cut_edges(g)) == exact.value
    assert edge_connectivity_bound(g)[0] >= exact.value - 1e-9


# ---------------------------------------------------------------- random cuts


def test_expected_cut_examples():
    assert expected_cut(G.complete(4), 2) == 4
    assert exhaustive_mean_cut(G.complete(4), 2) == 4
    p3 = G.path(3)
    assert expected_cut(p3, 1) == Fraction(4, 3) == exhaustive_mean_cut(p3, 1)
    w = cut_existence(p3, 1)
    assert w.u_high == (1,) and w.high_cut == 2
    assert w.u_low == (0,) and w.low_cut == 1
    c4 = cut_existence(G.cycle(4), 2)
    assert c4.expected == Fraction(8, 3) and {c4.low_cut, c4.high_cut} == {2, 4}
    for n in range(3, 7):
        for m in range(1, n):
            w = cut_existence(G.complete(n), m)
            assert w.high_cut == w.low_cut == m * (n - m)


@given(connected_graphs(2, 8), st.data())
def test_expected_cut_matches_average(g, data):
    m = data.draw(st.integers(1, g.n - 1))
    h = to_nx(g)
    mean = Fraction(sum(nx.cut_size(h, s) for s in combinations(range(g.n), m)), math.comb(g.n, m))
    assert expected_cut(g, m) == mean == exhaustive_mean_cut(g, m)


def test_cut_guard():
    with pytest.raises(EnumerationGuardError):
        exhaustive_mean_cut(G.complete(10), 5, limit=100)


def test_expected_cut_bounds_examples():
    c6 = G.cycle(6)
    b = expected_cut_bounds(c6, 2)
    # C_6 spectrum {4,3,3,1,1,0}: top two sum to 7
    assert b.regular_lower.rhs_exact == Fraction(24, 5) and b.regular_lower.lhs == pytest.approx(7)
    assert b.regular_upper.lhs == pytest.approx(2) and b.regular_upper.holds
    assert all(r.holds for r in b)
    k5 = expected_cut_bounds(G.complete(5), 2)
    assert k5.regular_lower.rhs_exact == 10 and k5.regular_lower.equality
    assert expected_cut_bounds(G.path(4), 2).regular_lower is None


@given(connected_graphs(2, 7), st.data())
def test_expected_cut_bounds_hold(g, data):
    m = data.draw(st.integers(1, g.n - 1))
    assert all(r.holds for r in expected_cut_bounds(g, m) if r is not None)


# ---------------------------------------------------------------- k-domination


def test_kdom_examples():
    assert is_k_dominating(G.complete(5), (0, 1), 2)
    k222 = G.complete_multipartite([2, 2, 2])
    assert is_k_dominating(k222, (0, 1), 2)
    assert not is_k_dominating(G.path(4), (1,), 1)
    r = kdom_bound(k222, (0, 1), 2)
    assert r.lhs == pytest.approx(12) and r.rhs_exact == 10 and r.holds and not r.equality
    r = kdom_bound(k222, (0, 1, 2, 3), 4)
    assert r.lhs == pytest.approx(20) and r.rhs_exact == 20 and r.equality
    r = kdom_bound(G.complete(5), (0,), 1)
    assert r.lhs == pytest.approx(5) and r.equality
    with pytest.raises(NotDominatingError) as exc:
        kdom_bound(G.path(4), (1,), 1)
    assert exc.value.vertex == 3


def test_greedy_kdom_examples():
    assert len(greedy_kdom(G.complete(5), 1)) == 1
    d = greedy_kdom(G.cycle(6), 1)
    assert len(d) <= 3 and is_k_dominating(G.cycle(6), d, 1)
    k222 = G.complete_multipartite([2, 2, 2])
    d = greedy_kdom(k222, 2)
    assert len(d) <= 4 and is_k_dominating(k222, d, 2)
    with pytest.raises(PreconditionError):
        greedy_kdom(G.path(4), 2)


@given(connected_graphs(3, 8), st.integers(1, 3))
def test_kdom_bound_holds_for_greedy(g, k):
    if min(g.degrees) < k:
        return
    try:
        d = greedy_kdom(g, k)
    except PreconditionError:
        return
    assert is_k_dominating(g, d, k)
    assert kdom_bound(g, d, k).holds


def test_kdom_bound_holds_exhaustively():
    for n in range(3, 6):
        for g in G.labeled_graphs(n):
            for k in range(1, 3):
                for m in range(1, n):
                    for d in combinations(range(n), m):
                        if is_k_dominating(g, d, k):
                            assert kdom_bound(g, d, k).holds


# ---------------------------------------------------------------- isoperimetric number


def brute_isoperimetric(g):
    h = to_nx(g)
    return min(
        Fraction(nx.cut_size(h, s), len(s)) for k in range(1, g.n // 2 + 1) for s in combinations(range(g.n), k)
    )


def test_isoperimetric_closed_forms():
    assert isoperimetric_number(G.complete(6))[0] == 3
    assert isoperimetric_number(G.path(7))[0] == Fraction(1, 3)
    assert isoperimetric_number(G.cycle(8))[0] == Fraction(1, 2)
    for n in range(2, 10):
        assert isoperimetric_number(G.complete(n))[0] == math.ceil(n / 2)
        assert isoperimetric_number(G.path(n))[0] == Fraction(1, n // 2)
    for n in range(3, 10):
        assert isoperimetric_number(G.cycle(n))[0] == Fraction(2, n // 2)


def test_mohar_examples():
    mb = mohar_bounds(G.complete(6))
    assert mb.lower == pytest.approx(3) and mb.upper == pytest.approx(math.sqrt(24)) and not mb.degenerate
    mb = mohar_bounds(G.cycle(8))
    assert mb.lower == pytest.approx((2 - math.sqrt(2)) / 2)
    mb = mohar_bounds(G.complete(2))
    assert mb.lower == pytest.approx(1) and mb.upper == 0 and mb.degenerate


def test_spectral_upper_examples():
    for p in range(1, 5):
        for q in range(1, 6):
            g = G.join(G.complete(p), G.empty(q))
            if g.n < 2:
                continue
            assert isoperimetric_upper(g)[0] == pytest.approx(min(p, math.ceil(g.n / 2)))
    g = G.join(G.complete(2), G.empty(5))
    assert isoperimetric_upper(g)[0] == pytest.approx(2)
    assert 2 <= mohar_bounds(g).upper
    assert isoperimetric_upper(G.complete(6))[0] == pytest.approx(3)


@given(connected_graphs(2, 8))
def test_isoperimetric_against_brute_force(g):
    r = isoperimetric_exact(g)
    assert r.value == brute_isoperimetric(g)
    assert Fraction(G.cut_size(g, G.mask_of(r.witness)), len(r.witness)) == r.value
    assert r.mohar_lower <= float(r.value) + 1e-9
    assert r.eq21_upper >= float(r.value) - 1e-9
    if not r.mohar_degenerate:
        assert float(r.value) <= r.mohar_upper + 1e-9


def test_isoperimetric_guard():
    with pytest.raises(EnumerationGuardError):
        isoperimetric_number(G.complete(30))
