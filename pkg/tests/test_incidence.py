from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from lapsum import graph as G
from lapsum.bounds import PreconditionError, gen_grone_merris, gen_grone_merris2
from lapsum.incidence import (
    augmented_quotient,
    edge_gram,
    expected_trace,
    nonzero_spectra_agree,
    orient,
    out_arc_quotient,
)
from lapsum.spectra import laplacian, tolerance

from .strategies import graph_and_subset
from .test_graph import to_nx


def check_orientation(g, u, oi):
    um = G.mask_of(u)
    tails = {t for t, _ in oi.arcs}
    for t, h in oi.arcs:
        if um >> t & 1 and not um >> h & 1:
            continue
        assert not (um >> h & 1 and not um >> t & 1), "cut edge points into U"
    for v in u:
        assert v in tails, f"vertex {v} of U has no out-arc"
    cols = sorted(c for v in u for c in oi.out_arcs(v))
    assert cols == list(range(oi.split))
    assert sorted(tuple(sorted(a)) for a in oi.arcs) == g.edges()


def test_orient_star_center():
    oi = orient(G.path(3), (1,))
    assert set(oi.arcs) == {(1, 0), (1, 2)}
    assert oi.out_arcs(1) == [0, 1]


def test_orient_c4_adjacent_pair():
    g = G.cycle(4)
    oi = orient(g, (0, 1))
    assert (0, 3) in oi.arcs and (1, 2) in oi.arcs
    # root 0 is the lowest vertex adjacent to the complement; 1 points to it
    assert (1, 0) in oi.arcs
    assert oi.out_degree(0) == 1 and oi.out_degree(1) == 2
    check_orientation(g, (0, 1), oi)


def test_orient_rejects_bad_input():
    with pytest.raises(PreconditionError):
        orient(G.empty(3), (0,))
    with pytest.raises(PreconditionError):
        orient(G.path(3), (0, 1, 2))


@given(graph_and_subset(2, 8))
def test_orientation_properties(gu):
    g, u = gu
    oi = orient(g, u)
    check_orientation(g, u, oi)
    assert np.array_equal(oi.q @ oi.q.T, laplacian(g))
    again = orient(g, u)
    assert again.arcs == oi.arcs and np.array_equal(again.q, oi.q)
    assert np.all((oi.q == 1).sum(axis=0) == 1) and np.all((oi.q == -1).sum(axis=0) == 1)
    # same factorisation as networkx's oriented incidence, up to column signs and order
    ref = nx.incidence_matrix(to_nx(g), oriented=True).toarray()
    assert np.array_equal(ref @ ref.T, oi.q @ oi.q.T)


def test_gram_examples():
    oi = orient(G.complete(2), (0,))
    gram = edge_gram(oi)
    assert gram.m_full.tolist() == [[2]]
    assert nonzero_spectra_agree(G.complete(2), gram)
    gram = edge_gram(orient(G.path(3), (1,)))
    assert np.all(np.diag(gram.m_full) == 2)
    assert np.allclose(sorted(np.linalg.eigvalsh(gram.m_full)), [1, 3])
    c4 = G.cycle(4)
    gram = edge_gram(orient(c4, (0,)))
    mu = sorted(np.linalg.eigvalsh(gram.m_full), reverse=True)
    assert np.allclose(mu, [4, 2, 2, 0])
    assert nonzero_spectra_agree(c4, gram)


@given(graph_and_subset(3, 8))
def test_gram_properties(gu):
    g, u = gu
    gram = edge_gram(orient(g, u))
    m = gram.m_full
    assert np.all(np.diag(m) == 2)
    off = m[~np.eye(len(m), dtype=bool)]
    assert set(off.tolist()) <= {-1, 0, 1}
    assert nonzero_spectra_agree(g, gram, tolerance(g))


def test_out_arc_quotient_examples():
    q = out_arc_quotient(G.path(3), (1,))
    assert np.allclose(q.b1.b, [[3]])
    assert q.trace_exact == 3 and q.diagonal_ok
    q = out_arc_quotient(G.complete(4), (0, 1, 2))
    assert q.trace_exact == 9
    assert q.report.rhs_exact == 9


@given(graph_and_subset(3, 8))
def test_out_arc_quotient_properties(gu):
    g, u = gu
    q = out_arc_quotient(g, u)
    assert q.diagonal_ok
    assert q.trace_exact == Fraction(int(expected_trace(g, u)))
    assert q.inner_interlacing.holds and q.outer_interlacing.holds
    assert abs(q.report.rhs - gen_grone_merris(g, u).rhs) <= tolerance(g)
    assert q.report.holds


def test_augmented_quotient_examples(join34):
    aq = augmented_quotient(G.cycle(4), (0,))
    assert aq.theta1 == pytest.approx(3) and aq.trace == pytest.approx(6)
    aq = augmented_quotient(join34, (3, 4, 5, 6))
    assert aq.theta1 == pytest.approx(3) and aq.trace == pytest.approx(19)
    # independent complement: padded B1
    g = G.star(4)
    aq = augmented_quotient(g, (0,))
    assert aq.theta1 == 0 and aq.interlacing is None
    assert aq.trace == pytest.approx(float(out_arc_quotient(g, (0,)).trace_exact))
    assert np.all(aq.b[-1] == 0)
    with pytest.raises(PreconditionError):
        augmented_quotient(G.cycle(4), (0, 1, 2))


@given(graph_and_subset(4, 8))
def test_augmented_quotient_properties(gu):
    g, u = gu
    if len(u) >= g.n - 1:
        return
    aq = augmented_quotient(g, u)
    t = tolerance(g)
    # columns of S are orthonormal
    assert np.allclose(aq.s.T @ aq.s, np.diag([1.0] * len(u) + [1.0 if aq.interlacing else 0.0]), atol=1e-12)
    assert abs(aq.trace - expected_trace(g, u, aq.theta1)) <= t
    assert abs(aq.trace - gen_grone_merris2(g, u).rhs) <= t
    assert aq.interlacing is None or aq.interlacing.holds
