"""Oriented incidence matrices and the edge-space quotients behind the
matching-type lower bounds.

For a proper subset ``U`` of a connected graph every edge is oriented so
that cut edges leave ``U`` and every vertex of ``U`` has an out-arc. The
columns of the incidence matrix ``Q`` (``+1`` at the tail, ``-1`` at the
head) are ordered with ``E[U]`` and the cut first (block ``Q1``) and
``E[V \\ U]`` last (block ``Q2``). ``M = Q^T Q`` shares its nonzero spectrum
with ``L = Q Q^T``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import BoundId, BoundReport, PreconditionError, _check_chain_input, _report, degree_sum
from .graph import Edge, Graph, Subset, components, inner_edge_count, mask_of
from .spectra import (
    InterlacingReport,
    Partition,
    QuotientMatrix,
    check_interlacing,
    eigenpair_max,
    eigenvalues_sym,
    laplacian_spectrum,
    quotient,
    tolerance,
)


@dataclass(frozen=True)
class OrientedIncidence:
    q: np.ndarray
    arcs: tuple[Edge, ...]  # (tail, head) per column
    subset: Subset
    split: int  # number of columns in block Q1
    owner: tuple[int, ...]  # tail of each Q1 column

    @property
    def q1(self) -> np.ndarray:
        return self.q[:, :self.split]

    @property
    def q2(self) -> np.ndarray:
        return self.q[:, self.split:]

    def out_arcs(self, v: int) -> list[int]:
        """Q1 column indices whose tail is ``v``."""
        return [k for k, t in enumerate(self.owner) if t == v]

    def out_degree(self, v: int) -> int:
        return sum(1 for t, _ in self.arcs if t == v)


def orient(g: Graph, u) -> OrientedIncidence:
    """Deterministic orientation satisfying the out-arc requirements.

    Cut edges point out of ``U``. Inside each component of ``G[U]`` a BFS
    tree is grown from the lowest vertex adjacent to the complement and its
    edges point towards that root. Every other edge points from the higher
    to the lower index.
    """
    u = _check_chain_input(g, u)
    um = mask_of(u)
    out_mask = g.full_mask & ~um
    towards_root: dict[frozenset, Edge] = {}
    for comp in components(g, within=um):
        root = next((v for v in comp if g.rows[v] & out_mask), None)
        if root is None:
            raise PreconditionError("a component of G[U] has no edge to the complement")
        cm = mask_of(comp)
        seen = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in range(g.n):
                if cm >> y & 1 and g.rows[x] >> y & 1 and y not in seen:
                    seen.add(y)
                    queue.append(y)
                    towards_root[frozenset((x, y))] = (y, x)

    inner_cut: list[Edge] = []
    outside: list[Edge] = []
    for a, b in g.edges():
        in_a, in_b = um >> a & 1, um >> b & 1
        if in_a and in_b:
            inner_cut.append(towards_root.get(frozenset((a, b)), (b, a)))
        elif in_a:
            inner_cut.append((a, b))
        elif in_b:
            inner_cut.append((b, a))
        else:
            outside.append((b, a))
    arcs = tuple(inner_cut + outside)
    q = np.zeros((g.n, len(arcs)), dtype=np.int64)
    for k, (t, h) in enumerate(arcs):
        q[t, k] = 1
        q[h, k] = -1
    return OrientedIncidence(q, arcs, u, len(inner_cut), tuple(t for t, _ in inner_cut))


@dataclass(frozen=True)
class EdgeGram:
    m_full: np.ndarray
    m1: np.ndarray


def edge_gram(oi: OrientedIncidence) -> EdgeGram:
    m = oi.q.T @ oi.q
    return EdgeGram(m, m[:oi.split, :oi.split])


def nonzero_spectra_agree(g: Graph, gram: EdgeGram, tol: float | None = None) -> bool:
    """Nonzero eigenvalues of ``M`` and ``L`` coincide as multisets."""
    t = tolerance(g) if tol is None else tol
    lam = laplacian_spectrum(g).values
    if gram.m_full.size == 0:
        return bool(np.all(np.abs(lam) <= t))
    mu = eigenvalues_sym(gram.m_full).values
    a = np.sort(lam[np.abs(lam) > t])
    b = np.sort(mu[np.abs(mu) > t])
    return len(a) == len(b) and bool(np.all(np.abs(a - b) <= t))


@dataclass(frozen=True)
class OutArcQuotient:
    """Quotient ``B1`` of ``M1`` over the out-arc classes ``{E_u : u in U}``."""

    incidence: OrientedIncidence
    gram: EdgeGram
    b1: QuotientMatrix
    block_sums: np.ndarray  # exact integer block sums of M1
    report: BoundReport
    inner_interlacing: InterlacingReport  # B1 into M1
    outer_interlacing: InterlacingReport  # M1 into M

    @property
    def diagonal_ok(self) -> bool:
        """``b_uu == d+(u) + 1`` exactly, for every ``u``."""
        sizes = [len(self.incidence.out_arcs(v)) for v in self.incidence.subset]
        return all(
            Fraction(int(self.block_sums[i, i]), sizes[i]) == self.incidence.out_degree(v) + 1
            for i, v in enumerate(self.incidence.subset)
        )

    @property
    def trace_exact(self) -> Fraction:
        sizes = [len(self.incidence.out_arcs(v)) for v in self.incidence.subset]
        return sum((Fraction(int(self.block_sums[i, i]), s) for i, s in enumerate(sizes)), Fraction(0))


def out_arc_partition(oi: OrientedIncidence) -> Partition:
    classes = [tuple(oi.out_arcs(v)) for v in oi.subset]
    for v, c in zip(oi.subset, classes):
        if not c:
            raise AssertionError(f"vertex {v} of U has no out-arc in Q1")
    return Partition(tuple(classes))


def out_arc_quotient(g: Graph, u, tol: float | None = None) -> OutArcQuotient:
    """Route to the ``m - |E[U]|`` bound through interlacing in edge space.

    ``trace(B1) = sum_u d_u - |E[U]| + m`` and the eigenvalues of ``B1``
    interlace those of ``M1``, which interlace those of ``M``.
    """
    if g.n <= 2:
        raise PreconditionError(f"graph must have more than 2 vertices, got n={g.n}")
    oi = orient(g, u)
    t = tolerance(g) if tol is None else tol
    gram = edge_gram(oi)
    part = out_arc_partition(oi)
    idx = [list(c) for c in part.classes]
    sums = np.array([[gram.m1[np.ix_(a, b)].sum() for b in idx] for a in idx], dtype=np.int64)
    b1 = quotient(gram.m1.astype(float), part)
    mu = eigenvalues_sym(b1.sym).values
    m1_spec = eigenvalues_sym(gram.m1).values
    m_spec = eigenvalues_sym(gram.m_full).values
    m = len(oi.subset)
    trace = sum((Fraction(int(sums[i, i]), len(idx[i])) for i in range(m)), Fraction(0))
    lam = laplacian_spectrum(g)
    report = _report(BoundId.EQ12, m, lam.top(m), trace, t, oi.subset)
    return OutArcQuotient(
        incidence=oi,
        gram=gram,
        b1=b1,
        block_sums=sums,
        report=report,
        inner_interlacing=check_interlacing(m1_spec, mu, t),
        outer_interlacing=check_interlacing(m_spec, m1_spec, t),
    )


@dataclass(frozen=True)
class AugmentedQuotient:
    """``B = S^T M S`` with out-arc indicator columns plus one column carrying
    the top eigenvector of ``Q2^T Q2``."""

    incidence: OrientedIncidence
    s: np.ndarray
    b: np.ndarray
    theta1: float
    report: BoundReport
    interlacing: InterlacingReport | None  # None when the complement has no edges

    @property
    def trace(self) -> float:
        return float(np.trace(self.b))


def augmented_quotient(g: Graph, u, tol: float | None = None) -> AugmentedQuotient:
    """Route to the ``+ theta_1`` bound. Needs ``m < n - 1``.

    When the complement spans no edges ``theta_1 = 0`` and ``B`` is ``B1``
    padded with a zero row and column.
    """
    if g.n <= 2:
        raise PreconditionError(f"graph must have more than 2 vertices, got n={g.n}")
    oi = orient(g, u)
    m = len(oi.subset)
    if m >= g.n - 1:
        raise PreconditionError(f"need m < n - 1, got m={m}, n={g.n}")
    t = tolerance(g) if tol is None else tol
    gram = edge_gram(oi)
    e = oi.q.shape[1]
    k2 = e - oi.split
    s = np.zeros((e, m + 1))
    for i, v in enumerate(oi.subset):
        cols = oi.out_arcs(v)
        s[cols, i] = 1.0 / np.sqrt(len(cols))
    if k2:
        q2 = oi.q2.astype(float)
        theta1, vec = eigenpair_max(q2.T @ q2)
        s[oi.split:, m] = vec
        b = s.T @ gram.m_full @ s
        inter = check_interlacing(eigenvalues_sym(gram.m_full).values, eigenvalues_sym(b).values, t)
    else:
        theta1 = 0.0
        b = s.T @ gram.m_full @ s
        inter = None
    lam = laplacian_spectrum(g)
    report = _report(BoundId.EQ13, m, lam.top(m + 1), float(np.trace(b)), t, oi.subset)
    return AugmentedQuotient(oi, s, b, theta1, report, inter)


def expected_trace(g: Graph, u: Subset, theta1: float = 0.0) -> float:
    """``sum_u d_u + m - |E[U]| + theta1`` computed combinatorially."""
    return degree_sum(g, u) + len(u) - inner_edge_count(g, mask_of(u)) + theta1
