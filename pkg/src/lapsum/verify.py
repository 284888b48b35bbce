"""Soundness sweeps: evaluate every inequality over graph corpora and collect violations."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .bounds import (
    SIZE_EVALUATORS,
    BoundId,
    BoundReport,
    PreconditionError,
    basic_chain,
    bh_bound,
    certify_equality,
    evaluate_size_bound,
    evaluate_subset_bound,
    gen_grone,
    gen_grone_merris,
    gen_grone_merris2,
    grone_merris,
    is_matching_shape,
)
from .graph import Graph, Subset, gnp, labeled_graphs, members_of, parse_graph6, write_graph6
from .incidence import augmented_quotient, expected_trace, nonzero_spectra_agree, out_arc_quotient
from .rng import SplitMix64
from .spectra import laplacian, laplacian_spectrum, tolerance

MAX_LABELED_N = 7


@dataclass
class Violation:
    graph6: str
    check: str
    subset: Subset | None
    detail: dict

    def to_dict(self) -> dict:
        return {"graph6": self.graph6, "check": self.check, "subset": None if self.subset is None else list(self.subset), "detail": self.detail}


@dataclass
class Tally:
    graphs: int = 0
    checks: int = 0
    violations: list[Violation] = field(default_factory=list)

    def merge(self, other: Tally) -> None:
        self.graphs += other.graphs
        self.checks += other.checks
        self.violations.extend(other.violations)

    def fail(self, g: Graph, check: str, subset: Subset | None, detail: dict) -> None:
        self.violations.append(Violation(write_graph6(g), check, subset, detail))

    def expect(self, ok: bool, g: Graph, check: str, subset: Subset | None = None, **detail) -> None:
        self.checks += 1
        if not ok:
            self.fail(g, check, subset, detail)

    def report(self, rep: BoundReport, g: Graph) -> None:
        self.checks += 1
        if not rep.holds:
            self.fail(g, rep.bound_id.value, rep.subset, rep.to_dict())


def all_proper_subsets(n: int) -> Iterator[Subset]:
    for m in range(1, n):
        yield from combinations(range(n), m)


def sampled_subsets(n: int, count: int, seed: int) -> list[Subset]:
    """``count`` distinct nonempty proper subsets, or all of them when there are fewer."""
    total = (1 << n) - 2
    if total <= count:
        return list(all_proper_subsets(n))
    picks = SplitMix64(seed).sample(total, count)
    return sorted((members_of(i + 1) for i in picks), key=lambda s: (len(s), s))


def check_graph(
    g: Graph,
    subsets: Iterable[Subset] | None = None,
    tol: float | None = None,
    certify: bool = False,
    quotient_zero: bool = True,
) -> Tally:
    """Evaluate every inequality on a connected graph.

    Size-only bounds run for every m; subset bounds for every subset given
    (all proper subsets by default). With ``certify`` the equality
    certificate is compared with the reported equality on both sides.
    """
    t = tolerance(g) if tol is None else tol
    tally = Tally(graphs=1)
    n = g.n
    for m in range(1, n + 1):
        tally.report(evaluate_size_bound(g, BoundId.EQ2, m, t), g)
        tally.report(evaluate_size_bound(g, BoundId.EQ3, m, t), g)
    for m in range(1, n):
        for bid in (BoundId.EQ4, BoundId.EQ6, BoundId.EQ7, BoundId.EQ8):
            tally.report(SIZE_EVALUATORS[bid](g, m, t), g)
    tally.report(bh_bound(g, range(n), t), g)

    for u in all_proper_subsets(n) if subsets is None else subsets:
        m = len(u)
        chain = basic_chain(g, u, t, with_quotient=quotient_zero)
        tally.report(chain.lower, g)
        tally.report(chain.upper, g)
        if quotient_zero:
            mu_min = float(chain.quotient_spectrum.values[-1])
            tally.expect(abs(mu_min) <= t, g, "quotient_zero", u, smallest=mu_min)
        if certify:
            for side, rep in (("upper", chain.upper), ("lower", chain.lower)):
                cert = certify_equality(g, u, side, t)
                tally.expect(cert.certified == rep.equality, g, f"certificate_{side}", u, certificate=cert.to_dict(), report=rep.to_dict())
        tally.report(gen_grone(g, u, t), g)
        tally.report(bh_bound(g, u, t), g)
        if n > 2:
            if is_matching_shape(g, u):
                tally.report(grone_merris(g, u, t), g)
            tally.report(gen_grone_merris(g, u, t), g)
            if m < n - 1:
                tally.report(gen_grone_merris2(g, u, t), g)
    return tally


def check_incidence(g: Graph, subsets: Iterable[Subset] | None = None, tol: float | None = None) -> Tally:
    """Incidence identities and interlacing for the edge-space quotients."""
    t = tolerance(g) if tol is None else tol
    tally = Tally(graphs=1)
    lap = laplacian(g).astype(np.int64)
    for u in all_proper_subsets(g.n) if subsets is None else subsets:
        if g.n <= 2:
            continue
        q1 = out_arc_quotient(g, u, t)
        oi = q1.incidence
        tally.expect(np.array_equal(oi.q @ oi.q.T, lap), g, "incidence_factorises_laplacian", u)
        tally.expect(q1.diagonal_ok, g, "out_arc_diagonal", u)
        tally.expect(q1.trace_exact == Fraction(int(expected_trace(g, u))), g, "out_arc_trace", u, trace=str(q1.trace_exact))
        tally.expect(nonzero_spectra_agree(g, q1.gram, t), g, "gram_nonzero_spectrum", u)
        tally.expect(q1.inner_interlacing.holds and q1.outer_interlacing.holds, g, "out_arc_interlacing", u)
        tally.expect(abs(q1.report.rhs - gen_grone_merris(g, u, t).rhs) <= t, g, "out_arc_matches_direct", u)
        if len(u) < g.n - 1:
            aq = augmented_quotient(g, u, t)
            direct = gen_grone_merris2(g, u, t)
            tally.expect(abs(aq.trace - direct.rhs) <= t, g, "augmented_trace", u, trace=aq.trace, rhs=direct.rhs)
            tally.expect(aq.interlacing is None or aq.interlacing.holds, g, "augmented_interlacing", u)
    return tally


def gnp_corpus(count: int, orders: tuple[int, ...], seed: int, p_range=(0.25, 0.9)) -> Iterator[Graph]:
    """``count`` connected G(n, p) graphs with n drawn from ``orders`` and p uniform in ``p_range``."""
    rng = SplitMix64(seed)
    made = 0
    while made < count:
        n = orders[rng.randbelow(len(orders))]
        p = p_range[0] + (p_range[1] - p_range[0]) * rng.random()
        g = gnp(n, p, rng.next_u64())
        if g.is_connected():
            made += 1
            yield g


def exhaustive_sweep(n_max: int, certify: bool = False, incidence: bool = False) -> Tally:
    if n_max > MAX_LABELED_N:
        raise ValueError(f"exhaustive labelled enumeration supports n <= {MAX_LABELED_N}")
    tally = Tally()
    for n in range(2, n_max + 1):
        for g in labeled_graphs(n):
            tally.merge(check_graph(g, certify=certify))
            if incidence:
                tally.merge(check_incidence(g))
    return tally


def sampled_sweep(count: int, orders: tuple[int, ...], seed: int, subsets_per_graph: int = 200) -> Tally:
    tally = Tally()
    for k, g in enumerate(gnp_corpus(count, orders, seed)):
        tally.merge(check_graph(g, sampled_subsets(g.n, subsets_per_graph, seed + k), quotient_zero=False))
    return tally


# ---------------------------------------------------------------- corpus files


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9)


def check_record(rec: dict) -> Tally:
    """Recompute a recorded bound report and compare every claimed field."""
    g = parse_graph6(rec["graph6"])
    bid = BoundId(rec["bound_id"])
    if rec.get("subset") is not None and bid not in SIZE_EVALUATORS:
        rep = evaluate_subset_bound(g, bid, rec["subset"])
    else:
        rep = evaluate_size_bound(g, bid, int(rec["m"]))
    tally = Tally(graphs=1)
    tally.report(rep, g)
    fresh = rep.to_dict()
    bad = {}
    for key in ("lhs", "rhs", "slack"):
        if key in rec and not _close(float(rec[key]), fresh[key]):
            bad[key] = {"recorded": rec[key], "computed": fresh[key]}
    for key in ("holds", "equality", "rhs_exact"):
        if key in rec and rec[key] != fresh[key]:
            bad[key] = {"recorded": rec[key], "computed": fresh[key]}
    tally.expect(not bad, g, "record_mismatch", rep.subset, bound_id=bid.value, fields=bad)
    return tally


def corpus_sweep(lines: Iterable[str]) -> tuple[Tally, list[dict]]:
    """Each line is a graph6 string (full check) or a JSON report record."""
    tally = Tally()
    errors = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("{"):
                tally.merge(check_record(json.loads(line)))
            else:
                g = parse_graph6(line)
                if not g.is_connected():
                    raise PreconditionError("graph must be connected")
                tally.merge(check_graph(g, certify=g.n <= 6))
        except (ValueError, KeyError) as exc:
            errors.append({"line": lineno, "error": str(exc)})
    return tally, errors
