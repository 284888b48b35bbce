"""Cuts, edge-connectivity, k-domination and the isoperimetric number.

Each spectral estimate here has an exact combinatorial counterpart that is
cheap enough on small graphs to serve as its oracle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np

from .bounds import (
    BoundId,
    BoundReport,
    PreconditionError,
    _report,
    _tol,
    degree_sum,
    degrees_desc,
    low_sum_skip_zero,
)
from .graph import Graph, Subset, as_subset, components, cut_size, mask_of, members_of, popcount
from .spectra import laplacian_spectrum, tolerance

SUBSET_LIMIT = 10**7
EXHAUSTIVE_MAX_N = 20
ISOPERIMETRIC_MAX_N = 24


class EnumerationGuardError(ValueError):
    """An exhaustive enumeration would exceed the configured size limit."""


def _guard_subsets(count: int, limit: int) -> None:
    if count > limit:
        raise EnumerationGuardError(f"{count} subsets exceeds the enumeration limit {limit}")


def _need_connected(g: Graph) -> None:
    if g.n < 2 or not g.is_connected():
        raise PreconditionError("graph must be connected with n >= 2")


def _need_proper_m(g: Graph, m: int) -> None:
    if not 0 < m < g.n:
        raise PreconditionError(f"m must satisfy 0 < m < n={g.n}, got {m}")


# ---------------------------------------------------------------- edge connectivity


def edge_connectivity_bound(g: Graph) -> tuple[float, int]:
    """``min over 0 < m < n of (n - m) * sum_{i<=m} (lambda_i - d_i)`` and the first minimising m."""
    _need_connected(g)
    lam = laplacian_spectrum(g).values
    d = degrees_desc(g)
    n = g.n
    best, arg = math.inf, 0
    acc = 0.0
    for m in range(1, n):
        acc += lam[m - 1] - d[m - 1]
        val = (n - m) * acc
        if val < best:
            best, arg = val, m
    return float(best), arg


@dataclass(frozen=True)
class CutResult:
    value: int | Fraction
    witness: Subset

    def cut_edges(self, g: Graph) -> list[tuple[int, int]]:
        wm = mask_of(self.witness)
        return [(a, b) for a, b in g.edges() if (wm >> a & 1) != (wm >> b & 1)]


def _max_flow_unit(g: Graph, s: int, t: int) -> tuple[int, int]:
    """Unit-capacity max flow on the undirected graph; returns (flow, source-side mask)."""
    flow: dict[tuple[int, int], int] = {}
    value = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            x = queue.popleft()
            for y in members_of(g.rows[x]):
                if y not in parent and flow.get((x, y), 0) < 1:
                    parent[y] = x
                    queue.append(y)
        if t not in parent:
            return value, mask_of(parent)
        y = t
        while parent[y] is not None:
            x = parent[y]
            if flow.get((y, x), 0) > 0:
                flow[(y, x)] -= 1
            else:
                flow[(x, y)] = flow.get((x, y), 0) + 1
            y = x
        value += 1


def exact_edge_connectivity(g: Graph) -> CutResult:
    """Global minimum edge cut via max flows from vertex 0 to every other vertex."""
    if g.n < 2:
        raise PreconditionError("edge connectivity needs n >= 2")
    comps = components(g)
    if len(comps) > 1:
        return CutResult(0, comps[0])
    best = None
    for t in range(1, g.n):
        value, side = _max_flow_unit(g, 0, t)
        if best is None or value < best[0]:
            best = (value, side)
    return CutResult(best[0], members_of(best[1]))


# ---------------------------------------------------------------- random cuts


def expected_cut(g: Graph, m: int) -> Fraction:
    """Mean cut size over a uniformly random m-subset: ``2em(n-m) / (n(n-1))``."""
    _need_proper_m(g, m)
    return Fraction(2 * g.e * m * (g.n - m), g.n * (g.n - 1))


def exhaustive_mean_cut(g: Graph, m: int, limit: int = SUBSET_LIMIT) -> Fraction:
    """Average of ``|cut(S)|`` over every m-subset ``S``, exactly."""
    _need_proper_m(g, m)
    if g.n > EXHAUSTIVE_MAX_N:
        raise EnumerationGuardError(f"exhaustive averaging supports n <= {EXHAUSTIVE_MAX_N}")
    count = math.comb(g.n, m)
    _guard_subsets(count, limit)
    total = sum(cut_size(g, mask_of(s)) for s in combinations(range(g.n), m))
    return Fraction(total, count)


class CutWitnesses(NamedTuple):
    u_high: Subset
    u_low: Subset
    high_cut: int
    low_cut: int
    expected: Fraction


def cut_existence(g: Graph, m: int, limit: int = SUBSET_LIMIT) -> CutWitnesses:
    """m-subsets with the largest and the smallest cut (first in lexicographic order).

    Their cuts bracket the expected cut, which is what the averaging argument promises.
    """
    _need_proper_m(g, m)
    if g.n > EXHAUSTIVE_MAX_N:
        raise EnumerationGuardError(f"exhaustive search supports n <= {EXHAUSTIVE_MAX_N}")
    _guard_subsets(math.comb(g.n, m), limit)
    hi = lo = None
    for s in combinations(range(g.n), m):
        c = cut_size(g, mask_of(s))
        if hi is None or c > hi[0]:
            hi = (c, s)
        if lo is None or c < lo[0]:
            lo = (c, s)
    w = CutWitnesses(hi[1], lo[1], hi[0], lo[0], expected_cut(g, m))
    assert w.high_cut >= w.expected >= w.low_cut
    return w


class RandomCutBounds(NamedTuple):
    lower: BoundReport
    upper: BoundReport
    regular_lower: BoundReport | None
    regular_upper: BoundReport | None


def expected_cut_bounds(g: Graph, m: int, tol: float | None = None, limit: int = SUBSET_LIMIT) -> RandomCutBounds:
    """Chain bounds with the cut term replaced by its average ``2em / (n(n-1))``.

    The lower report uses the subset with the largest cut, the upper report
    the one with the smallest. For regular graphs the degree-free forms
    ``mdn / (n-1)`` are added.
    """
    _need_connected(g)
    _need_proper_m(g, m)
    n, t = g.n, _tol(g, tol)
    w = cut_existence(g, m, limit)
    share = Fraction(2 * g.e * m, n * (n - 1))
    lam = laplacian_spectrum(g)
    top = lam.top(m)
    low = low_sum_skip_zero(lam, m)
    lower = _report(BoundId.EQ16, m, top, degree_sum(g, w.u_high) + share, t, w.u_high)
    upper = _report(BoundId.EQ17, m, low, degree_sum(g, w.u_low) + share, t, w.u_low)
    reg_lo = reg_hi = None
    if g.is_regular():
        d = g.degrees[0]
        value = Fraction(m * d * n, n - 1)
        reg_lo = _report(BoundId.EQ18_LOWER, m, top, value, t)
        reg_hi = _report(BoundId.EQ18_UPPER, m, low, value, t)
    return RandomCutBounds(lower, upper, reg_lo, reg_hi)


# ---------------------------------------------------------------- k-domination


class NotDominatingError(PreconditionError):
    def __init__(self, vertex: int, count: int, k: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has {count} neighbours in D, needs {k}")


def _deficient_vertex(g: Graph, dm: int, k: int) -> tuple[int, int] | None:
    for v in range(g.n):
        if not dm >> v & 1:
            c = popcount(g.rows[v] & dm)
            if c < k:
                return v, c
    return None


def is_k_dominating(g: Graph, d: Iterable[int], k: int) -> bool:
    """Every vertex outside ``d`` has at least ``k`` neighbours inside it."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return _deficient_vertex(g, mask_of(as_subset(g, d)), k) is None


def kdom_bound(g: Graph, d: Iterable[int], k: int, tol: float | None = None) -> BoundReport:
    """``lambda_1 + ... + lambda_m >= sum_{u in D} d_u + k`` for a k-dominating ``D`` of size m."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    d = as_subset(g, d)
    if not 0 < len(d) < g.n:
        raise PreconditionError(f"need 0 < |D| < n={g.n}, got {len(d)}")
    bad = _deficient_vertex(g, mask_of(d), k)
    if bad is not None:
        raise NotDominatingError(bad[0], bad[1], k)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ19, len(d), lam.top(len(d)), Fraction(degree_sum(g, d) + k), _tol(g, tol), d)


def greedy_kdom(g: Graph, k: int) -> Subset:
    """Greedy k-dominating set: repeatedly add the vertex removing the most
    outstanding demand (lowest index on ties). Not necessarily minimum."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if min(g.degrees) < k:
        v = min(range(g.n), key=lambda x: (g.degrees[x], x))
        raise PreconditionError(f"vertex {v} has degree {g.degrees[v]} < k={k}; no proper k-dominating set guaranteed")
    dm = 0
    need = [k] * g.n
    while _deficient_vertex(g, dm, k) is not None:
        best, gain = -1, -1
        for v in range(g.n):
            if dm >> v & 1:
                continue
            gn = need[v] + sum(1 for w in members_of(g.rows[v] & ~dm) if need[w] > 0)
            if gn > gain:
                best, gain = v, gn
        dm |= 1 << best
        need[best] = 0
        for w in members_of(g.rows[best]):
            if need[w]:
                need[w] -= 1
    if dm == g.full_mask:
        raise PreconditionError("greedy selection swallowed every vertex")
    return members_of(dm)


# ---------------------------------------------------------------- isoperimetric number


class MoharBounds(NamedTuple):
    lower: float
    upper: float
    degenerate: bool


def mohar_bounds(g: Graph, tol: float | None = None) -> MoharBounds:
    """``lambda_{n-1} / 2 <= i(G) <= sqrt(lambda_{n-1} (2 d_max - lambda_{n-1}))``.

    Flagged degenerate for K_2 and K_3 (where the upper estimate is known to
    fail) and whenever the radicand vanishes.
    """
    _need_connected(g)
    t = tolerance(g) if tol is None else tol
    a = float(laplacian_spectrum(g).values[g.n - 2])
    radicand = a * (2 * max(g.degrees) - a)
    degenerate = (g.is_complete() and g.n <= 3) or radicand <= t
    return MoharBounds(a / 2, math.sqrt(max(radicand, 0.0)), degenerate)


def isoperimetric_upper(g: Graph) -> tuple[float, int]:
    """``min over ceil(n/2) <= m < n of sum_{i<=m} (lambda_i - d_i)`` and its first minimiser."""
    _need_connected(g)
    lam = laplacian_spectrum(g).values
    d = np.array(degrees_desc(g), dtype=float)
    partial = np.cumsum(lam - d)
    lo = (g.n + 1) // 2
    best_m = min(range(lo, g.n), key=lambda m: (partial[m - 1], m))
    return float(partial[best_m - 1]), best_m


@dataclass(frozen=True)
class IsoperimetricResult:
    value: Fraction
    witness: Subset
    mohar_lower: float
    mohar_upper: float
    mohar_degenerate: bool
    eq21_upper: float


def isoperimetric_number(g: Graph, max_n: int = ISOPERIMETRIC_MAX_N) -> tuple[Fraction, Subset]:
    """Exact ``min |cut(U)| / |U|`` over ``0 < |U| <= n/2``; lexicographically first minimiser."""
    if g.n < 2:
        raise PreconditionError("isoperimetric number needs n >= 2")
    if g.n > max_n:
        raise EnumerationGuardError(f"exhaustive isoperimetric search supports n <= {max_n}")
    best = None
    for k in range(1, g.n // 2 + 1):
        for s in combinations(range(g.n), k):
            val = Fraction(cut_size(g, mask_of(s)), k)
            if best is None or (val, s) < best:
                best = (val, s)
    return best


def isoperimetric_exact(g: Graph, max_n: int = ISOPERIMETRIC_MAX_N) -> IsoperimetricResult:
    value, witness = isoperimetric_number(g, max_n)
    mohar = mohar_bounds(g)
    return IsoperimetricResult(value, witness, mohar.lower, mohar.upper, mohar.degenerate, isoperimetric_upper(g)[0])

