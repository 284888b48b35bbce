"""Exhaustive soundness sweep with per-bound slack statistics.

For every connected labelled graph up to --n-max vertices, evaluates each
inequality on every admissible m (and every proper subset for the subset
forms) and tabulates: evaluations, failures, equalities, minimum slack.
"""

import argparse
import time
from collections import defaultdict
from itertools import combinations

from lapsum.bounds import SIZE_EVALUATORS, SUBSET_BOUNDS, BoundId, PreconditionError, evaluate_subset_bound
from lapsum.graph import labeled_graphs
from lapsum.spectra import tolerance


def admissible_sizes(bid, n):
    return range(1, n + 1) if bid in (BoundId.EQ2, BoundId.EQ3) else range(1, n)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=5)
    args = ap.parse_args()

    stats = defaultdict(lambda: [0, 0, 0, float("inf")])

    def record(rep):
        s = stats[rep.bound_id.value]
        s[0] += 1
        s[1] += not rep.holds
        s[2] += rep.equality
        s[3] = min(s[3], rep.slack)

    start = time.perf_counter()
    graphs = 0
    for n in range(2, args.n_max + 1):
        for g in labeled_graphs(n):
            graphs += 1
            t = tolerance(g)
            for bid, fn in SIZE_EVALUATORS.items():
                for m in admissible_sizes(bid, n):
                    record(fn(g, m, t))
            for m in range(1, n):
                for u in combinations(range(n), m):
                    for bid in SUBSET_BOUNDS:
                        try:
                            record(evaluate_subset_bound(g, bid, u, t))
                        except PreconditionError:
                            pass  # matching shape, n > 2, m < n-1 hypotheses
    print(f"{graphs} connected labelled graphs, n <= {args.n_max}, {time.perf_counter() - start:.1f}s")
    print(f"{'bound':<11}{'evals':>10}{'fail':>7}{'equal':>9}{'min slack':>14}")
    for bid in BoundId:
        if bid.value in stats:
            ev, bad, eq, lo = stats[bid.value]
            print(f"{bid.value:<11}{ev:>10}{bad:>7}{eq:>9}{lo:>14.3e}")


if __name__ == "__main__":
    main()
