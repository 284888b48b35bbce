"""Command-line entry point.

Every run prints its effective configuration first, then one record per
line. Exit status: 0 success, 1 an inequality failed or a counterexample
was found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Iterator, TextIO

from . import graph as G
from .applications import (
    SUBSET_LIMIT,
    EnumerationGuardError,
    cut_existence,
    edge_connectivity_bound,
    exact_edge_connectivity,
    expected_cut_bounds,
    greedy_kdom,
    isoperimetric_exact,
    kdom_bound,
)
from .bounds import (
    SIZE_EVALUATORS,
    SUBSET_BOUNDS,
    BoundId,
    BoundReport,
    PreconditionError,
    basic_chain,
    certify_equality,
    evaluate_size_bound,
    evaluate_subset_bound,
    format_fraction,
)
from .graph import Graph, parse_graph6, write_graph6
from .incidence import augmented_quotient, out_arc_quotient
from .search import Strategy, best_subset
from .spectra import EIGENSOLVERS, TOL_SCALE, laplacian_spectrum, set_default_eigensolver, set_tolerance_scale
from .verify import MAX_LABELED_N, Tally, corpus_sweep, exhaustive_sweep, sampled_sweep

TOL_ENV = "LAPSUM_TOL_SCALE"
STRATEGY_NAMES = {"exhaustive": "exhaustive", "top": "top_degree", "bottom": "bottom_degree", "random": "random_sample"}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    tol_scale: float = TOL_SCALE
    subset_limit: int = SUBSET_LIMIT
    format: str = "json"
    seed: int = 0
    eigensolver: str = "lapack"


# ---------------------------------------------------------------- output


def _num(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, float):
        return float(f"{x:.12g}") if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


class Emitter:
    def __init__(self, fmt: str, out: TextIO):
        self.fmt = fmt
        self.out = out
        self._header: tuple | None = None

    def config(self, cfg: RunConfig) -> None:
        line = json.dumps({"config": asdict(cfg)})
        self.out.write(line + "\n" if self.fmt == "json" else "# " + line + "\n")

    def __call__(self, rec: dict) -> None:
        rec = _num(rec)
        if self.fmt == "json":
            self.out.write(json.dumps(rec) + "\n")
            return
        keys = tuple(rec)
        if keys != self._header:
            self._header = keys
            self.out.write("\t".join(keys) + "\n")
        self.out.write("\t".join(_tsv_cell(rec[k]) for k in keys) + "\n")


def _tsv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# ---------------------------------------------------------------- input


def _read_graphs(paths: list[str], stdin: TextIO) -> Iterator[tuple[int, Graph | None, str | None]]:
    """(line number, graph or None, error or None) for every non-blank line."""
    sources: Iterable[TextIO]
    if not paths or paths == ["-"]:
        sources = [stdin]
    else:
        sources = (open(p) for p in paths)
    lineno = 0
    for src in sources:
        for raw in src:
            lineno += 1
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                yield lineno, parse_graph6(line), None
            except ValueError as exc:
                yield lineno, None, str(exc)


def _subset(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertex indices, got {text!r}")


def _int_list(text: str) -> list[int]:
    return list(_subset(text))


# ---------------------------------------------------------------- commands


def _resolve_ids(name: str) -> list[BoundId]:
    if name == "eq5":
        return [BoundId.EQ5_LOWER, BoundId.EQ5_UPPER]
    if name == "eq18":
        return [BoundId.EQ18_LOWER, BoundId.EQ18_UPPER]
    try:
        return [BoundId(name)]
    except ValueError:
        raise UsageError(f"unknown bound id {name!r}")


def cmd_spectrum(args, emit, graphs) -> int:
    status = 0
    for lineno, g, err in graphs:
        if err:
            emit({"line": lineno, "error": err})
            status = 2
            continue
        emit({
            "line": lineno,
            "graph6": write_graph6(g),
            "n": g.n,
            "e": g.e,
            "degrees": list(g.degrees),
            "spectrum": laplacian_spectrum(g).tolist(),
        })
    return status


def _incidence_dump(g: Graph, u) -> dict:
    q1 = out_arc_quotient(g, u)
    out = {"Q": q1.incidence.q.tolist(), "arcs": [list(a) for a in q1.incidence.arcs], "M": q1.gram.m_full.tolist(), "B1": q1.b1.b.tolist()}
    if len(q1.incidence.subset) < g.n - 1:
        out["B"] = augmented_quotient(g, u).b.tolist()
    return out


def _bound_reports(g: Graph, bid: BoundId, args, cfg: RunConfig) -> list[BoundReport]:
    if bid in SIZE_EVALUATORS or bid not in SUBSET_BOUNDS:
        if args.m is None:
            raise UsageError(f"{bid.value} needs --m")
        if bid in SIZE_EVALUATORS:
            return [evaluate_size_bound(g, bid, args.m)]
        bounds = expected_cut_bounds(g, args.m, limit=cfg.subset_limit)
        pick = {BoundId.EQ16: bounds.lower, BoundId.EQ17: bounds.upper, BoundId.EQ18_LOWER: bounds.regular_lower, BoundId.EQ18_UPPER: bounds.regular_upper}
        if bid not in pick:
            raise UsageError(f"{bid.value} needs a dominating set; use `apps --kdom`")
        rep = pick[bid]
        if rep is None:
            raise PreconditionError(f"{bid.value} applies to regular graphs only")
        return [rep]
    if args.subset is not None:
        return [evaluate_subset_bound(g, bid, args.subset)]
    if args.m is None:
        raise UsageError(f"{bid.value} needs --subset or --m")
    strategy = Strategy(STRATEGY_NAMES[args.strategy], args.samples, cfg.seed, cfg.subset_limit)
    return [best_subset(g, bid, args.m, strategy)[1]]


def cmd_bound(args, emit, graphs, cfg: RunConfig) -> int:
    ids = _resolve_ids(args.id)
    status = 0
    for lineno, g, err in graphs:
        if err:
            emit({"line": lineno, "error": err})
            status = 2
            continue
        for bid in ids:
            try:
                rep = _bound_reports(g, bid, args, cfg)[0]
            except (PreconditionError, EnumerationGuardError, G.GraphError) as exc:
                emit({"line": lineno, "graph6": write_graph6(g), "bound_id": bid.value, "error": str(exc)})
                status = max(status, 2)
                continue
            rec = {"line": lineno, "graph6": write_graph6(g), **rep.to_dict()}
            if args.dump_incidence and rep.subset is not None:
                try:
                    rec["incidence"] = _incidence_dump(g, rep.subset)
                except PreconditionError as exc:
                    rec["incidence"] = {"error": str(exc)}
            emit(rec)
            if not rep.holds:
                status = 1
    return status


def cmd_certify(args, emit, graphs, cfg: RunConfig) -> int:
    sides = ("upper", "lower") if args.side == "both" else (args.side,)
    status = 0
    for lineno, g, err in graphs:
        if err:
            emit({"line": lineno, "error": err})
            status = 2
            continue
        try:
            chain = basic_chain(g, args.subset)
        except (PreconditionError, G.GraphError) as exc:
            emit({"line": lineno, "graph6": write_graph6(g), "error": str(exc)})
            status = 2
            continue
        for side in sides:
            cert = certify_equality(g, args.subset, side)
            rep = chain.upper if side == "upper" else chain.lower
            agree = cert.certified == rep.equality
            emit({"line": lineno, "graph6": write_graph6(g), "certificate": cert.to_dict(), "report": rep.to_dict(), "agrees": agree})
            if not agree or not rep.holds:
                status = 1
    return status


def cmd_verify(args, emit, stdin: TextIO, cfg: RunConfig) -> int:
    errors: list[dict] = []
    if args.mode == "exhaustive_labeled":
        if args.n_max > MAX_LABELED_N:
            raise UsageError(f"--n-max must be <= {MAX_LABELED_N} for exhaustive_labeled")
        tally = exhaustive_sweep(args.n_max, certify=args.certify, incidence=args.incidence)
    elif args.mode == "gnp_sample":
        tally = sampled_sweep(args.count, tuple(args.orders), cfg.seed, args.subsets)
    else:
        if args.corpus is None or args.corpus == "-":
            tally, errors = corpus_sweep(stdin)
        else:
            with open(args.corpus) as fh:
                tally, errors = corpus_sweep(fh)
    for v in tally.violations:
        emit({"violation": v.to_dict()})
    for e in errors:
        emit(e)
    emit({"summary": {"mode": args.mode, "graphs": tally.graphs, "checks": tally.checks, "violations": len(tally.violations), "errors": len(errors)}})
    if tally.violations:
        return 1
    return 2 if errors else 0


def _generate(args) -> Iterator[Graph]:
    fam = args.family
    if fam == "join":
        yield G.join(G.complete(args.p), G.empty(args.q))
    elif fam == "multipartite":
        yield G.complete_multipartite(args.parts)
    elif fam == "gnp":
        yield G.gnp(args.n, args.prob, args.seed)
    elif fam == "complete":
        yield G.complete(args.n)
    elif fam == "empty":
        yield G.empty(args.n)
    elif fam == "path":
        yield G.path(args.n)
    elif fam == "cycle":
        yield G.cycle(args.n)
    elif fam == "star":
        yield G.star(args.n)
    elif fam == "labeled":
        yield from G.labeled_graphs(args.n, connected_only=not args.all)


def cmd_gen(args, out: TextIO) -> int:
    for g in _generate(args):
        out.write(write_graph6(g) + "\n")
    return 0


def cmd_apps(args, emit, graphs, cfg: RunConfig) -> int:
    if not (args.edge_connectivity or args.isoperimetric or args.kdom is not None or args.expected_cut is not None):
        raise UsageError("apps needs at least one of --edge-connectivity, --isoperimetric, --kdom, --expected-cut")
    status = 0
    for lineno, g, err in graphs:
        if err:
            emit({"line": lineno, "error": err})
            status = 2
            continue
        rec: dict = {"line": lineno, "graph6": write_graph6(g)}
        try:
            if args.edge_connectivity:
                value, m = edge_connectivity_bound(g)
                exact = exact_edge_connectivity(g)
                rec["edge_connectivity"] = {"bound": value, "m": m, "exact": exact.value, "witness": list(exact.witness), "holds": value >= exact.value - 1e-9}
                status = status or (0 if rec["edge_connectivity"]["holds"] else 1)
            if args.isoperimetric:
                r = isoperimetric_exact(g)
                sandwich = r.mohar_degenerate or (r.mohar_lower <= float(r.value) + 1e-9 and float(r.value) <= r.mohar_upper + 1e-9)
                rec["isoperimetric"] = {
                    "value": r.value,
                    "witness": list(r.witness),
                    "mohar_lower": r.mohar_lower,
                    "mohar_upper": r.mohar_upper,
                    "mohar_degenerate": r.mohar_degenerate,
                    "spectral_upper": r.eq21_upper,
                    "holds": sandwich and r.eq21_upper >= float(r.value) - 1e-9,
                }
                status = status or (0 if rec["isoperimetric"]["holds"] else 1)
            if args.kdom is not None:
                d = args.dom_set if args.dom_set is not None else greedy_kdom(g, args.kdom)
                rep = kdom_bound(g, d, args.kdom)
                rec["kdom"] = {"k": args.kdom, "set": list(d), **rep.to_dict()}
                status = status or (0 if rep.holds else 1)
            if args.expected_cut is not None:
                m = args.expected_cut
                b = expected_cut_bounds(g, m, limit=cfg.subset_limit)
                w = cut_existence(g, m, limit=cfg.subset_limit)
                rec["expected_cut"] = {
                    "m": m,
                    "expected": w.expected,
                    "high": {"subset": list(w.u_high), "cut": w.high_cut},
                    "low": {"subset": list(w.u_low), "cut": w.low_cut},
                    "bounds": [r.to_dict() for r in b if r is not None],
                }
                if not all(r.holds for r in b if r is not None):
                    status = status or 1
        except (PreconditionError, EnumerationGuardError) as exc:
            rec["error"] = str(exc)
            status = max(status, 2)
        emit(rec)
    return status


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lapsum", description="Interlacing bounds on sums of Laplacian eigenvalues.")
    env_scale = os.environ.get(TOL_ENV)
    ap.add_argument("--tol-scale", type=float, default=float(env_scale) if env_scale else TOL_SCALE,
                    help=f"factor c in the tolerance c*(1+||L||_F) (default {TOL_SCALE}; env {TOL_ENV})")
    ap.add_argument("--subset-limit", type=int, default=SUBSET_LIMIT, help="refuse exhaustive searches larger than this")
    ap.add_argument("--format", choices=("json", "tsv"), default="json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eigensolver", choices=EIGENSOLVERS, default="lapack")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Laplacian spectrum of each graph6 line")
    p.add_argument("inputs", nargs="*")

    p = sub.add_parser("bound", help="evaluate one inequality")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--id", required=True, help="bound id, e.g. eq5 (both sides), eq9, eq13")
    p.add_argument("--m", type=int)
    p.add_argument("--subset", type=_subset)
    p.add_argument("--strategy", choices=tuple(STRATEGY_NAMES), default="exhaustive")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--dump-incidence", action="store_true", help="include Q, M, B1 and B for the chosen subset")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for --strategy random")

    p = sub.add_parser("certify", help="equality certificate for the basic chain")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--subset", type=_subset, required=True)
    p.add_argument("--side", choices=("upper", "lower", "both"), default="both")

    p = sub.add_parser("verify", help="soundness sweep")
    p.add_argument("--mode", choices=("exhaustive_labeled", "gnp_sample", "corpus_file"), default="exhaustive_labeled")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--corpus", help="graph6 or JSON-report lines (default stdin)")
    p.add_argument("--certify", action="store_true", help="also compare equality certificates with reports")
    p.add_argument("--incidence", action="store_true", help="also check the incidence identities")
    p.add_argument("--count", type=int, default=10000, help="graphs for gnp_sample")
    p.add_argument("--orders", type=_int_list, default=[6, 7, 8], help="orders for gnp_sample")
    p.add_argument("--subsets", type=int, default=200, help="sampled subsets per graph for gnp_sample")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for gnp_sample")

    p = sub.add_parser("gen", help="generate graph6 lines")
    p.add_argument("family", choices=("join", "multipartite", "gnp", "complete", "empty", "path", "cycle", "star", "labeled"))
    p.add_argument("--p", type=float, help="clique size for join; edge probability for gnp")
    p.add_argument("--q", type=int, help="independent-set size for join")
    p.add_argument("--n", type=int)
    p.add_argument("--parts", type=_int_list)
    p.add_argument("--all", action="store_true", help="labeled: include disconnected graphs")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for gnp")

    p = sub.add_parser("apps", help="edge-connectivity, isoperimetric, k-domination and cut estimates")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--edge-connectivity", action="store_true")
    p.add_argument("--isoperimetric", action="store_true")
    p.add_argument("--kdom", type=int, metavar="K")
    p.add_argument("--dom-set", type=_subset, help="k-dominating set (default: greedy)")
    p.add_argument("--expected-cut", type=int, metavar="M")
    return ap


def _gen_args(args) -> None:
    need = {"join": ("p", "q"), "multipartite": ("parts",), "gnp": ("n", "p"), "labeled": ("n",)}
    for name in need.get(args.family, ("n",)):
        if getattr(args, name) is None:
            raise UsageError(f"gen {args.family} needs --{name}")
    if args.family == "join":
        if args.p != int(args.p):
            raise UsageError("--p must be an integer clique size for join")
        args.p = int(args.p)
    args.prob = args.p


def main(argv: list[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = RunConfig(args.command, args.tol_scale, args.subset_limit, args.format, args.seed, args.eigensolver)
    try:
        set_tolerance_scale(cfg.tol_scale)
        set_default_eigensolver(cfg.eigensolver)
        if args.command == "gen":
            _gen_args(args)
            return cmd_gen(args, stdout)
        emit = Emitter(cfg.format, stdout)
        emit.config(cfg)
        if args.command == "verify":
            return cmd_verify(args, emit, stdin, cfg)
        graphs = _read_graphs(args.inputs, stdin)
        if args.command == "spectrum":
            return cmd_spectrum(args, emit, graphs)
        if args.command == "bound":
            return cmd_bound(args, emit, graphs, cfg)
        if args.command == "certify":
            return cmd_certify(args, emit, graphs, cfg)
        return cmd_apps(args, emit, graphs, cfg)
    except (UsageError, ValueError, OSError) as exc:
        print(f"lapsum: error: {exc}", file=sys.stderr)
        return 2
    finally:
        set_tolerance_scale(TOL_SCALE)
        set_default_eigensolver("lapack")


if __name__ == "__main__":
    sys.exit(main())
