"""Eigenvalue-sum inequalities for graph Laplacians, evaluated as reports.

Every evaluator returns a :class:`BoundReport` comparing a sum of Laplacian
eigenvalues (``lhs``) with a combinatorial quantity (``rhs``). Combinatorial
right-hand sides are built as exact :class:`~fractions.Fraction` values and
converted to float only for the final comparison.

Eigenvalues are indexed ``lambda_1 >= ... >= lambda_n = 0`` in docstrings;
in code ``lam[i - 1]`` is ``lambda_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .graph import (
    Graph,
    Subset,
    complement,
    components,
    cut_size,
    induced_subgraph,
    inner_edge_count,
    mask_of,
    popcount,
    proper_subset,
    as_subset,
)
from .spectra import Partition, Spectrum, laplacian, laplacian_spectrum, quotient, tolerance


class PreconditionError(ValueError):
    """The inputs fall outside the hypotheses of the inequality."""


class BoundId(str, Enum):
    EQ2 = "eq2"
    EQ3 = "eq3"
    EQ4 = "eq4"
    EQ5_LOWER = "eq5_lower"
    EQ5_UPPER = "eq5_upper"
    EQ6 = "eq6"
    EQ7 = "eq7"
    EQ8 = "eq8"
    EQ9 = "eq9"
    EQ10 = "eq10"
    EQ11 = "eq11"
    EQ12 = "eq12"
    EQ13 = "eq13"
    EQ16 = "eq16"
    EQ17 = "eq17"
    EQ18_LOWER = "eq18_lower"
    EQ18_UPPER = "eq18_upper"
    EQ19 = "eq19"

    def __str__(self):
        return self.value


# True where the eigenvalue sum is bounded from above (lhs <= rhs).
UPPER_DIRECTION = frozenset(
    {BoundId.EQ3, BoundId.EQ5_LOWER, BoundId.EQ7, BoundId.EQ8, BoundId.EQ17, BoundId.EQ18_UPPER}
)

# Ids whose right-hand side depends on a caller-chosen subset U.
SUBSET_BOUNDS = (
    BoundId.EQ5_LOWER,
    BoundId.EQ5_UPPER,
    BoundId.EQ9,
    BoundId.EQ10,
    BoundId.EQ11,
    BoundId.EQ12,
    BoundId.EQ13,
)
# Ids determined by m alone (U, if any, is fixed by degree ranking).
SIZE_BOUNDS = (BoundId.EQ2, BoundId.EQ3, BoundId.EQ4, BoundId.EQ6, BoundId.EQ7, BoundId.EQ8)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _g12(x: float) -> float:
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class BoundReport:
    bound_id: BoundId
    m: int
    lhs: float
    rhs: float
    rhs_exact: Fraction | None
    tol: float
    subset: Subset | None = None

    @property
    def upper(self) -> bool:
        """True when the inequality reads ``lhs <= rhs``."""
        return self.bound_id in UPPER_DIRECTION

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs if self.upper else self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tol

    @property
    def equality(self) -> bool:
        return abs(self.lhs - self.rhs) <= self.tol

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id.value,
            "m": self.m,
            "lhs": _g12(self.lhs),
            "rhs": _g12(self.rhs),
            "rhs_exact": None if self.rhs_exact is None else format_fraction(self.rhs_exact),
            "slack": _g12(self.slack),
            "holds": self.holds,
            "equality": self.equality,
            "subset": None if self.subset is None else list(self.subset),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _report(bid, m, lhs, rhs, tol, subset=None) -> BoundReport:
    exact = rhs if isinstance(rhs, Fraction) else None
    return BoundReport(BoundId(bid), m, float(lhs), float(rhs), exact, tol, subset)


# ---------------------------------------------------------------- helpers


def _tol(g: Graph, tol: float | None) -> float:
    return tolerance(g) if tol is None else tol


def _need_connected(g: Graph) -> None:
    if not g.is_connected():
        raise PreconditionError("graph must be connected")


def _need_m(g: Graph, m: int, lo: int, hi: int) -> None:
    if not lo <= m <= hi:
        raise PreconditionError(f"m must satisfy {lo} <= m <= {hi} for n={g.n}, got {m}")


def degrees_desc(g: Graph) -> list[int]:
    return sorted(g.degrees, reverse=True)


def top_degree_subset(g: Graph, m: int) -> Subset:
    """The ``m`` highest-degree vertices; ties go to the lower index."""
    return tuple(sorted(sorted(range(g.n), key=lambda v: (-g.degrees[v], v))[:m]))


def bottom_degree_subset(g: Graph, m: int) -> Subset:
    """The ``m`` lowest-degree vertices; ties go to the higher index."""
    return tuple(sorted(sorted(range(g.n), key=lambda v: (g.degrees[v], -v))[:m]))


def top_sum(lam: Spectrum, m: int) -> float:
    """``lambda_1 + ... + lambda_m``."""
    return lam.top(m)


def low_sum_skip_zero(lam: Spectrum, m: int) -> float:
    """``lambda_{n-1} + ... + lambda_{n-m}``, the m smallest after dropping ``lambda_n``."""
    n = len(lam)
    return float(np.sum(lam.values[n - 1 - m:n - 1]))


def degree_sum(g: Graph, u: Iterable[int]) -> int:
    return sum(g.degrees[v] for v in u)


# ---------------------------------------------------------------- size-only bounds


def schur_lower(g: Graph, m: int, tol: float | None = None) -> BoundReport:
    """Top-m eigenvalue sum against the m largest degrees (lower bound)."""
    _need_m(g, m, 1, g.n)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ2, m, top_sum(lam, m), Fraction(sum(degrees_desc(g)[:m])), _tol(g, tol))


def low_degree_upper(g: Graph, m: int, tol: float | None = None) -> BoundReport:
    """Bottom-m eigenvalue sum (including the zero) against the m smallest degrees."""
    _need_m(g, m, 1, g.n)
    lam = laplacian_spectrum(g)
    rhs = Fraction(sum(degrees_desc(g)[g.n - m:]))
    return _report(BoundId.EQ3, m, lam.bottom(m), rhs, _tol(g, tol))


def grone_lower(g: Graph, m: int, tol: float | None = None) -> BoundReport:
    """Grone's strengthening: top-m eigenvalue sum >= top-m degree sum + 1 for connected g, m < n."""
    _need_connected(g)
    _need_m(g, m, 1, g.n - 1)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ4, m, top_sum(lam, m), Fraction(sum(degrees_desc(g)[:m]) + 1), _tol(g, tol))


# ---------------------------------------------------------------- the basic chain


class ChainResult(NamedTuple):
    lower: BoundReport
    upper: BoundReport
    quotient_spectrum: Spectrum | None


def chain_middle(g: Graph, u: Subset) -> Fraction:
    """``sum_{u in U} d_u + |cut(U)| / (n - m)`` as an exact rational."""
    return Fraction(degree_sum(g, u)) + Fraction(cut_size(g, mask_of(u)), g.n - len(u))


def _check_chain_input(g: Graph, u: Iterable[int]) -> Subset:
    _need_connected(g)
    try:
        return proper_subset(g, u)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None


def basic_chain(g: Graph, u: Iterable[int], tol: float | None = None, with_quotient: bool = True) -> ChainResult:
    """Both sides of the two-sided chain for a proper vertex subset ``U``.

    ``lower``: ``lambda_{n-1} + ... + lambda_{n-m} <= mid`` and
    ``upper``: ``mid <= lambda_1 + ... + lambda_m`` where ``mid`` is
    :func:`chain_middle`. With ``with_quotient`` the spectrum of the quotient
    of L over ``{u_1}, ..., {u_m}, V \\ U`` is returned too; its smallest
    value is 0 because the quotient has zero row sums.
    """
    u = _check_chain_input(g, u)
    m = len(u)
    t = _tol(g, tol)
    lam = laplacian_spectrum(g)
    mid = chain_middle(g, u)
    lower = _report(BoundId.EQ5_LOWER, m, low_sum_skip_zero(lam, m), mid, t, u)
    upper = _report(BoundId.EQ5_UPPER, m, top_sum(lam, m), mid, t, u)
    mu = None
    if with_quotient:
        mu = quotient(laplacian(g), Partition.split_off(u, g.n)).spectrum()
    return ChainResult(lower, upper, mu)


@dataclass(frozen=True)
class EqualityCertificate:
    """Combinatorial and spectral conditions for equality on one side of the chain.

    Let ``theta_1 >= ... >= theta_{n-m}`` be the Laplacian spectrum of the
    graph induced on the complement and ``b = |cut| / (n - m)``. When every
    vertex of ``U`` sees all or none of the complement, the values
    ``theta_i + b`` (``i <= n-m-1``) are Laplacian eigenvalues of ``g``;
    equality on the upper side means they fill ``lambda_{m+1..n-1}``, on the
    lower side ``lambda_{1..n-m-1}``. ``eigen_condition`` checks that whole
    block; ``pivot_condition`` checks only its boundary entry
    (``lambda_{m+1} = theta_1 + b``, resp. ``lambda_{n-m-1} = theta_{n-m-1} + b``).
    Both are vacuous when the complement is a single vertex.
    """

    side: str
    subset: Subset
    all_or_none: bool
    eigen_condition: bool
    pivot_condition: bool
    b: Fraction
    theta_spectrum: Spectrum
    lam_block: tuple[float, ...]
    complement_connected: bool

    @property
    def certified(self) -> bool:
        return self.all_or_none and self.eigen_condition

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "subset": list(self.subset),
            "all_or_none": self.all_or_none,
            "eigen_condition": self.eigen_condition,
            "pivot_condition": self.pivot_condition,
            "b": format_fraction(self.b),
            "theta_spectrum": [_g12(x) for x in self.theta_spectrum],
            "lambda_block": [_g12(x) for x in self.lam_block],
            "complement_connected": self.complement_connected,
            "certified": self.certified,
        }


def all_or_none(g: Graph, u: Subset) -> bool:
    """Every vertex of ``U`` sees either all or none of the complement."""
    out = g.full_mask & ~mask_of(u)
    return all(g.rows[v] & out in (0, out) for v in u)


def certify_equality(g: Graph, u: Iterable[int], side: str = "upper", tol: float | None = None) -> EqualityCertificate:
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    u = _check_chain_input(g, u)
    n, m = g.n, len(u)
    t = _tol(g, tol)
    lam = laplacian_spectrum(g).values
    h, _ = induced_subgraph(g, complement(g, u))
    theta = laplacian_spectrum(h)
    b = Fraction(cut_size(g, mask_of(u)), n - m)
    k = n - m - 1
    shifted = theta.values[:k] + float(b)
    block = lam[m:m + k] if side == "upper" else lam[:k]
    diffs = np.abs(block - shifted)
    pivot = 0 if side == "upper" else k - 1
    return EqualityCertificate(
        side=side,
        subset=u,
        all_or_none=all_or_none(g, u),
        eigen_condition=bool(np.all(diffs <= t)),
        pivot_condition=bool(diffs[pivot] <= t) if k else True,
        b=b,
        theta_spectrum=theta,
        lam_block=tuple(float(x) for x in block),
        complement_connected=h.is_connected(),
    )


# ---------------------------------------------------------------- degree-ranked subsets


def top_degree_bound(g: Graph, m: int, tol: float | None = None) -> BoundReport:
    """Upper side of the chain with ``U`` = the m highest-degree vertices."""
    _need_connected(g)
    _need_m(g, m, 1, g.n - 1)
    u = top_degree_subset(g, m)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ6, m, top_sum(lam, m), chain_middle(g, u), _tol(g, tol), u)


def bottom_degree_bound(g: Graph, m: int, tol: float | None = None) -> BoundReport:
    """Lower side of the chain with ``U`` = the m lowest-degree vertices."""
    _need_connected(g)
    _need_m(g, m, 1, g.n - 1)
    u = bottom_degree_subset(g, m)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ7, m, low_sum_skip_zero(lam, m), chain_middle(g, u), _tol(g, tol), u)


def bottom_degree_min_bound(g: Graph, m: int, tol: float | None = None) -> BoundReport:
    """As :func:`bottom_degree_bound`, with the cut term capped by the (m+1)-th smallest degree."""
    _need_connected(g)
    _need_m(g, m, 1, g.n - 1)
    n = g.n
    u = bottom_degree_subset(g, m)
    d = degrees_desc(g)
    cap = min(Fraction(d[n - m - 1]), Fraction(cut_size(g, mask_of(u)), n - m))
    rhs = Fraction(sum(d[n - m:])) + cap
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ8, m, low_sum_skip_zero(lam, m), rhs, _tol(g, tol), u)


# ---------------------------------------------------------------- subset bounds


def gen_grone(g: Graph, u: Iterable[int], tol: float | None = None) -> BoundReport:
    """Top-m sum >= degree sum of U + |cut(U)| / |vertex boundary of U|."""
    u = _check_chain_input(g, u)
    um = mask_of(u)
    reach = 0
    for v in u:
        reach |= g.rows[v]
    boundary = popcount(reach & ~um)
    rhs = Fraction(degree_sum(g, u)) + Fraction(cut_size(g, um), boundary)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ9, len(u), top_sum(lam, len(u)), rhs, _tol(g, tol), u)


class InducedShapeError(PreconditionError):
    def __init__(self, vertex: int, degree: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has degree {degree} >= 2 in G[U]; G[U] must be a matching plus isolated vertices")


def _need_order_above_two(g: Graph) -> None:
    if g.n <= 2:
        raise PreconditionError(f"graph must have more than 2 vertices, got n={g.n}")


def grone_merris(g: Graph, u: Iterable[int], tol: float | None = None) -> BoundReport:
    """For G[U] made of r disjoint edges and isolated vertices: top-m sum >= degree sum + m - r."""
    _need_order_above_two(g)
    u = _check_chain_input(g, u)
    um = mask_of(u)
    for v in u:
        k = popcount(g.rows[v] & um)
        if k >= 2:
            raise InducedShapeError(v, k)
    r = inner_edge_count(g, um)
    m = len(u)
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ10, m, top_sum(lam, m), Fraction(degree_sum(g, u) + m - r), _tol(g, tol), u)


def is_matching_shape(g: Graph, u: Subset) -> bool:
    um = mask_of(u)
    return all(popcount(g.rows[v] & um) <= 1 for v in u)


def outside_components(g: Graph, u: Subset) -> int:
    """Components of G[U] that are not whole components of G."""
    um = mask_of(u)
    h = 0
    for comp in components(g, within=um):
        cm = mask_of(comp)
        reach = 0
        for v in comp:
            reach |= g.rows[v]
        if reach & ~cm:
            h += 1
    return h


def bh_bound(g: Graph, u: Iterable[int], tol: float | None = None) -> BoundReport:
    """Top-m sum >= degree sum of U + h, h counting components of G[U] that leak out of U.

    Valid for disconnected ``g`` and for ``U = V``.
    """
    u = as_subset(g, u)
    if not u:
        raise PreconditionError("subset must be nonempty")
    m = len(u)
    lam = laplacian_spectrum(g)
    rhs = Fraction(degree_sum(g, u) + outside_components(g, u))
    return _report(BoundId.EQ11, m, top_sum(lam, m), rhs, _tol(g, tol), u)


def gen_grone_merris(g: Graph, u: Iterable[int], tol: float | None = None) -> BoundReport:
    """Top-m sum >= degree sum of U + m - |E[U]|."""
    _need_order_above_two(g)
    u = _check_chain_input(g, u)
    m = len(u)
    rhs = Fraction(degree_sum(g, u) + m - inner_edge_count(g, mask_of(u)))
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ12, m, top_sum(lam, m), rhs, _tol(g, tol), u)


def largest_complement_eigenvalue(g: Graph, u: Subset) -> float:
    """Largest Laplacian eigenvalue of the graph induced on ``V \\ U``."""
    h, _ = induced_subgraph(g, complement(g, u))
    if h.e == 0:
        return 0.0
    return float(laplacian_spectrum(h)[0])


def gen_grone_merris2(g: Graph, u: Iterable[int], tol: float | None = None) -> BoundReport:
    """Top-(m+1) sum >= degree sum of U + m - |E[U]| + theta_1, theta_1 = top eigenvalue of L(G[V \\ U]).

    Requires ``m < n - 1`` so the complement keeps at least two vertices.
    """
    _need_order_above_two(g)
    u = _check_chain_input(g, u)
    m = len(u)
    if m >= g.n - 1:
        raise PreconditionError(f"need m < n - 1, got m={m}, n={g.n}")
    theta1 = largest_complement_eigenvalue(g, u)
    rhs = degree_sum(g, u) + m - inner_edge_count(g, mask_of(u)) + theta1
    lam = laplacian_spectrum(g)
    return _report(BoundId.EQ13, m, top_sum(lam, m + 1), rhs, _tol(g, tol), u)


SUBSET_EVALUATORS = {
    BoundId.EQ9: gen_grone,
    BoundId.EQ10: grone_merris,
    BoundId.EQ11: bh_bound,
    BoundId.EQ12: gen_grone_merris,
    BoundId.EQ13: gen_grone_merris2,
}

SIZE_EVALUATORS = {
    BoundId.EQ2: schur_lower,
    BoundId.EQ3: low_degree_upper,
    BoundId.EQ4: grone_lower,
    BoundId.EQ6: top_degree_bound,
    BoundId.EQ7: bottom_degree_bound,
    BoundId.EQ8: bottom_degree_min_bound,
}


def evaluate_subset_bound(g: Graph, bid: BoundId | str, u: Iterable[int], tol: float | None = None) -> BoundReport:
    """Dispatch a subset bound by id; ``eq5_lower``/``eq5_upper`` pick one side of the chain."""
    bid = BoundId(bid)
    if bid is BoundId.EQ5_LOWER:
        return basic_chain(g, u, tol, with_quotient=False).lower
    if bid is BoundId.EQ5_UPPER:
        return basic_chain(g, u, tol, with_quotient=False).upper
    if bid not in SUBSET_EVALUATORS:
        raise ValueError(f"{bid} does not take a vertex subset")
    return SUBSET_EVALUATORS[bid](g, u, tol)


def evaluate_size_bound(g: Graph, bid: BoundId | str, m: int, tol: float | None = None) -> BoundReport:
    bid = BoundId(bid)
    if bid not in SIZE_EVALUATORS:
        raise ValueError(f"{bid} is not determined by m alone")
    return SIZE_EVALUATORS[bid](g, m, tol)

