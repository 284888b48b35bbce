"""Choosing the vertex subset that makes a subset bound as sharp as possible."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .applications import SUBSET_LIMIT, EnumerationGuardError
from .bounds import (
    SUBSET_BOUNDS,
    BoundId,
    BoundReport,
    PreconditionError,
    bottom_degree_subset,
    evaluate_subset_bound,
    top_degree_subset,
)
from .graph import Graph, Subset, members_of
from .rng import SplitMix64
from .spectra import tolerance

KINDS = ("top_degree", "bottom_degree", "exhaustive", "random_sample")


@dataclass(frozen=True)
class Strategy:
    kind: str = "exhaustive"
    sample_count: int = 200
    seed: int = 0
    limit: int = SUBSET_LIMIT

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}; choose from {KINDS}")


def colex_subsets(n: int, m: int) -> Iterator[Subset]:
    """All m-subsets of ``range(n)`` in colexicographic order (Gosper's hack)."""
    if m == 0:
        yield ()
        return
    x = (1 << m) - 1
    top = 1 << n
    while x < top:
        yield members_of(x)
        low = x & -x
        ripple = x + low
        x = ripple | (((x ^ ripple) >> 2) // low)


def candidates(g: Graph, m: int, s: Strategy) -> Iterator[Subset]:
    if s.kind == "top_degree":
        yield top_degree_subset(g, m)
    elif s.kind == "bottom_degree":
        yield bottom_degree_subset(g, m)
    elif s.kind == "exhaustive":
        count = math.comb(g.n, m)
        if count > s.limit:
            raise EnumerationGuardError(f"{count} subsets exceeds the enumeration limit {s.limit}")
        yield from colex_subsets(g.n, m)
    else:
        rng = SplitMix64(s.seed)
        for _ in range(s.sample_count):
            yield tuple(sorted(rng.sample(g.n, m)))


def best_subset(g: Graph, bound_id: BoundId | str, m: int, s: Strategy = Strategy()) -> tuple[Subset, BoundReport]:
    """Subset of size m giving the sharpest right-hand side for ``bound_id``.

    Lower bounds on an eigenvalue sum want the largest rhs, upper bounds the
    smallest. Values within the graph tolerance count as ties, and ties go to
    the lexicographically smallest subset. Candidates violating the bound's
    hypotheses (e.g. the matching shape) are skipped.
    """
    bid = BoundId(bound_id)
    if bid not in SUBSET_BOUNDS:
        raise ValueError(f"{bid} does not take a free vertex subset")
    if not 0 < m < g.n:
        raise PreconditionError(f"m must satisfy 0 < m < n={g.n}, got {m}")
    tol = tolerance(g)
    best: BoundReport | None = None
    for u in candidates(g, m, s):
        try:
            rep = evaluate_subset_bound(g, bid, u, tol)
        except PreconditionError:
            if bid is BoundId.EQ10:
                continue
            raise
        if best is None:
            best = rep
            continue
        gain = best.rhs - rep.rhs if rep.upper else rep.rhs - best.rhs
        if gain > tol or (gain >= -tol and rep.subset < best.subset):
            best = rep
    if best is None:
        raise PreconditionError(f"no admissible subset of size {m} for {bid}")
    return best.subset, best
